#include "relkit/judge.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <set>
#include <thread>

#include <httplib.h>

#include "relkit/jsonl.hpp"
#include "relkit/timeutil.hpp"

namespace relkit {

void BackendConfig::validate() const {
    if (max_in_flight < 1) {
        throw ValidationError("max_in_flight must be >= 1");
    }
    if (temperature < 0.0) {
        throw ValidationError("temperature must be >= 0");
    }
    if (retry_limit < 0) {
        throw ValidationError("retry_limit must be >= 0");
    }
}

ParsedScore parse_score(const std::string& raw, int scale_min, int scale_max) {
    static constexpr const char* kToken = "score";
    static constexpr std::size_t kTokenLen = 5;

    // Last case-insensitive occurrence; COT completions mention the word
    // mid-reasoning, the final verdict comes last.
    std::size_t pos = std::string::npos;
    for (std::size_t i = 0; i + kTokenLen <= raw.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < kTokenLen; ++j) {
            if (std::tolower(static_cast<unsigned char>(raw[i + j])) != kToken[j]) {
                match = false;
                break;
            }
        }
        if (match) pos = i;
    }
    if (pos == std::string::npos) {
        return {std::nullopt, JudgeError::ParseFailure};
    }

    std::size_t i = pos + kTokenLen;
    while (i < raw.size() &&
           (raw[i] == ':' || std::isspace(static_cast<unsigned char>(raw[i])))) {
        ++i;
    }
    bool negative = false;
    if (i < raw.size() && (raw[i] == '-' || raw[i] == '+')) {
        negative = raw[i] == '-';
        ++i;
    }
    if (i >= raw.size() || !std::isdigit(static_cast<unsigned char>(raw[i]))) {
        return {std::nullopt, JudgeError::ParseFailure};
    }
    long value = 0;
    while (i < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i]))) {
        value = std::min<long>(value * 10 + (raw[i] - '0'), 1000000000L);
        ++i;
    }
    if (negative) value = -value;
    if (value < scale_min || value > scale_max) {
        return {std::nullopt, JudgeError::OutOfRange};
    }
    return {RelevanceGrade::checked(static_cast<int>(value)), std::nullopt};
}

HttpChatBackend::HttpChatBackend(const BackendConfig& config) : config_(config) {
    config_.validate();
    const std::string& url = config_.endpoint_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ValidationError("endpoint_url must include a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        base_url_ = url;
        path_ = "/v1/chat/completions";
    } else {
        base_url_ = url.substr(0, path_start);
        path_ = url.substr(path_start);
        if (path_ == "/") path_ = "/v1/chat/completions";
    }
}

ChatResult HttpChatBackend::complete(const RenderedPrompt& prompt) {
    httplib::Client client(base_url_);
    const auto seconds = static_cast<time_t>(config_.request_timeout_seconds);
    const auto micros = static_cast<time_t>(
        (config_.request_timeout_seconds - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);
    if (!config_.api_key.empty()) {
        client.set_default_headers({{"Authorization", "Bearer " + config_.api_key}});
    }

    json body = {
        {"model", config_.model_name},
        {"messages",
         json::array({json{{"role", "system"}, {"content", prompt.system_text}},
                      json{{"role", "user"}, {"content", prompt.user_text}}})},
        {"temperature", config_.temperature},
        {"max_tokens", config_.resolved_max_tokens(prompt.config_echo.use_cot)},
    };
    if (config_.sampling_seed) {
        body["seed"] = *config_.sampling_seed;
    }

    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) {
        throw TransportError("request to " + base_url_ + path_ + " failed: " +
                             httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw TransportError("backend returned HTTP " + std::to_string(res->status));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty()) {
        throw TransportError("backend returned a malformed completion body");
    }

    ChatResult result;
    result.content = reply["choices"][0]["message"]["content"].get<std::string>();
    if (reply.contains("usage")) {
        const json& usage = reply["usage"];
        if (usage.contains("prompt_tokens")) {
            result.prompt_tokens = usage["prompt_tokens"].get<int>();
        }
        if (usage.contains("completion_tokens")) {
            result.completion_tokens = usage["completion_tokens"].get<int>();
        }
    }
    return result;
}

JudgeOutcome judge_pair(const RenderedPrompt& prompt, ChatBackend& backend, int retry_limit) {
    JudgeOutcome outcome;
    for (int attempt = 0; attempt <= retry_limit; ++attempt) {
        ++outcome.attempts;
        ChatResult result;
        try {
            result = backend.complete(prompt);
        } catch (const TransportError&) {
            outcome.error = JudgeError::Transport;
            return outcome;
        }
        outcome.raw_output = result.content;
        const ParsedScore parsed = parse_score(result.content, PromptConfig::kScaleMin,
                                               PromptConfig::kScaleMax);
        if (parsed.grade) {
            outcome.grade = parsed.grade;
            outcome.error.reset();
            return outcome;
        }
        outcome.error = parsed.error;  // retry with the identical prompt
    }
    return outcome;
}

// ---- journal ---------------------------------------------------------------

struct JournalWriter::Impl {
    std::mutex mutex;
    JsonlWriter writer;
    Impl(const std::filesystem::path& path, bool append) : writer(path, append) {}
};

JournalWriter::JournalWriter(const std::filesystem::path& path, bool append)
    : impl_(std::make_shared<Impl>(path, append)) {}

void JournalWriter::append(const JournalEntry& entry) {
    json record = {{"query_id", entry.query_id},
                   {"doc_id", entry.doc_id},
                   {"raw_output", entry.raw_output},
                   {"timestamp", entry.timestamp}};
    if (entry.predicted) {
        record["predicted"] = entry.predicted->value();
    } else if (entry.error) {
        record["error"] = to_string(*entry.error);
    }
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->writer.write(record);
    impl_->writer.flush();
}

std::vector<JournalEntry> load_journal(const std::filesystem::path& path) {
    std::vector<JournalEntry> entries;
    for_each_jsonl_record(path, [&](std::size_t line_no, const json& record) {
        JournalEntry entry;
        entry.query_id = record.at("query_id").get<std::string>();
        entry.doc_id = record.at("doc_id").get<std::string>();
        entry.raw_output = record.value("raw_output", std::string());
        entry.timestamp = record.value("timestamp", std::string());
        if (record.contains("predicted")) {
            const int g = record.at("predicted").get<int>();
            if (g < RelevanceGrade::kMin || g > RelevanceGrade::kMax) {
                throw ValidationError(path.filename().string() + ":" +
                                      std::to_string(line_no) + ": predicted grade " +
                                      std::to_string(g) + " outside scale");
            }
            entry.predicted = RelevanceGrade::checked(g);
        } else if (record.contains("error")) {
            entry.error = judge_error_from_string(record.at("error").get<std::string>());
        } else {
            throw ValidationError(path.filename().string() + ":" + std::to_string(line_no) +
                                  ": journal record has neither predicted nor error");
        }
        entries.push_back(std::move(entry));
    });
    return entries;
}

JudgmentMap journal_judgments(const std::vector<JournalEntry>& entries) {
    JudgmentMap map;
    for (const JournalEntry& entry : entries) {
        Judgment j;
        j.grade = entry.predicted;
        j.error = entry.error;
        map[{entry.query_id, entry.doc_id}] = j;
    }
    return map;
}

// ---- batch driver ----------------------------------------------------------

namespace {

struct TaskRef {
    std::size_t group;
    std::size_t pair;
};

}  // namespace

std::vector<QueryGroup> judge_batch(const EvalDataset& dataset,
                                    const PromptConfig& prompt_config, ChatBackend& backend,
                                    const BackendConfig& backend_config,
                                    const std::vector<FewShotExample>& shots,
                                    const BatchOptions& options) {
    prompt_config.validate();
    backend_config.validate();

    std::vector<QueryGroup> out = dataset.groups;

    // Resume: pairs already journaled are restored, not re-requested.
    std::set<PairKey> done;
    if (options.resume && !options.journal_path.empty() &&
        std::filesystem::exists(options.journal_path)) {
        const auto prior = journal_judgments(load_journal(options.journal_path));
        for (QueryGroup& group : out) {
            for (JudgedPair& pair : group.pairs) {
                auto it = prior.find({pair.query_id, pair.document_id});
                if (it == prior.end()) continue;
                pair.predicted = it->second.grade;
                pair.error = it->second.error;
                done.insert(it->first);
            }
        }
    }

    std::vector<TaskRef> tasks;
    for (std::size_t g = 0; g < out.size(); ++g) {
        for (std::size_t p = 0; p < out[g].pairs.size(); ++p) {
            const JudgedPair& pair = out[g].pairs[p];
            if (done.count({pair.query_id, pair.document_id}) == 0) {
                tasks.push_back(TaskRef{g, p});
            }
        }
    }

    std::optional<JournalWriter> journal;
    if (!options.journal_path.empty()) {
        journal.emplace(options.journal_path, /*append=*/options.resume);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::atomic<std::int64_t> completed{0};
    std::atomic<std::int64_t> failures{0};
    std::exception_ptr worker_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!abort.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            JudgedPair& pair = out[tasks[i].group].pairs[tasks[i].pair];
            try {
                const RenderedPrompt prompt =
                    render_prompt(out[tasks[i].group].query,
                                  dataset.document(pair.document_id), prompt_config, shots);
                const JudgeOutcome result =
                    judge_pair(prompt, backend, backend_config.retry_limit);
                pair.predicted = result.grade;
                pair.error = result.error;
                if (!result.raw_output.empty()) {
                    pair.raw_output = result.raw_output;
                }
                if (journal) {
                    journal->append(JournalEntry{pair.query_id, pair.document_id,
                                                 pair.predicted, pair.error,
                                                 result.raw_output, iso_timestamp_utc()});
                }
                const std::int64_t total = completed.fetch_add(1) + 1;
                const std::int64_t failed =
                    pair.error ? failures.fetch_add(1) + 1 : failures.load();
                if (total >= options.abort_min_completed &&
                    static_cast<double>(failed) >
                        options.abort_failure_rate * static_cast<double>(total)) {
                    abort.store(true);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!worker_error) worker_error = std::current_exception();
                abort.store(true);
            }
        }
    };

    const std::size_t worker_count = std::max<std::size_t>(
        1, std::min<std::size_t>(static_cast<std::size_t>(backend_config.max_in_flight),
                                 tasks.size()));
    if (!tasks.empty()) {
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        for (std::size_t w = 0; w < worker_count; ++w) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    if (worker_error) std::rethrow_exception(worker_error);
    if (abort.load()) {
        throw AbortError("failure rate exceeded " +
                         std::to_string(options.abort_failure_rate) + " after " +
                         std::to_string(completed.load()) +
                         " pairs; partial results persisted");
    }
    return out;
}

// ---- throughput ------------------------------------------------------------

ThroughputReport bench_throughput(const EvalDataset& dataset,
                                  const PromptConfig& prompt_config, ChatBackend& backend,
                                  const BackendConfig& backend_config,
                                  const std::vector<FewShotExample>& shots) {
    prompt_config.validate();
    backend_config.validate();

    std::vector<RenderedPrompt> prompts;
    for (const QueryGroup& group : dataset.groups) {
        for (const JudgedPair& pair : group.pairs) {
            prompts.push_back(render_prompt(group.query, dataset.document(pair.document_id),
                                            prompt_config, shots));
        }
    }
    if (prompts.empty()) {
        throw ValidationError("bench_throughput: empty dataset");
    }

    std::vector<ChatResult> results(prompts.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr worker_error;
    std::mutex error_mutex;

    const auto start = std::chrono::steady_clock::now();
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= prompts.size()) break;
            try {
                results[i] = backend.complete(prompts[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!worker_error) worker_error = std::current_exception();
                next.store(prompts.size());
                break;
            }
        }
    };
    const std::size_t worker_count = std::max<std::size_t>(
        1, std::min<std::size_t>(static_cast<std::size_t>(backend_config.max_in_flight),
                                 prompts.size()));
    {
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        for (std::size_t w = 0; w < worker_count; ++w) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    const auto end = std::chrono::steady_clock::now();
    if (worker_error) std::rethrow_exception(worker_error);

    ThroughputReport report;
    report.method_tag = prompt_config.tag();
    report.prompt_count = static_cast<std::int64_t>(prompts.size());
    report.small_sample = prompts.size() < 100;
    report.wall_seconds = std::chrono::duration<double>(end - start).count();
    if (report.wall_seconds <= 0.0) {
        report.wall_seconds = 1e-9;  // sub-resolution batch; keep the ratio finite
    }
    report.prompts_per_second =
        static_cast<double>(report.prompt_count) / report.wall_seconds;

    bool have_usage = true;
    for (const ChatResult& r : results) {
        if (!r.prompt_tokens || !r.completion_tokens) {
            have_usage = false;
            break;
        }
    }
    double prompt_tokens = 0.0;
    double completion_tokens = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (have_usage) {
            prompt_tokens += static_cast<double>(*results[i].prompt_tokens);
            completion_tokens += static_cast<double>(*results[i].completion_tokens);
        } else {
            // chars/4: the usual rough token estimate for Latin-script text.
            prompt_tokens += static_cast<double>(prompts[i].char_count()) / 4.0;
            completion_tokens += static_cast<double>(results[i].content.size()) / 4.0;
        }
    }
    report.approximate_token_counts = !have_usage;
    report.mean_prompt_length_tokens = prompt_tokens / static_cast<double>(prompts.size());
    report.mean_predicted_length_tokens =
        completion_tokens / static_cast<double>(prompts.size());
    return report;
}

}  // namespace relkit
