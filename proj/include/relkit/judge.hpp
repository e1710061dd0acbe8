#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "relkit/dataset.hpp"
#include "relkit/prompting.hpp"
#include "relkit/rescale.hpp"
#include "relkit/types.hpp"

namespace relkit {

struct BackendConfig {
    std::string endpoint_url;  // e.g. http://localhost:8000/v1/chat/completions
    std::string model_name;
    std::string api_key;              // empty -> no Authorization header
    double temperature = 0.0;         // labels are artifacts, keep them reproducible
    std::optional<int> max_output_tokens;  // unset -> 8, or 512 with COT
    std::optional<std::uint64_t> sampling_seed;  // forwarded when the backend honors one
    int max_in_flight = 4;
    double request_timeout_seconds = 60.0;
    int retry_limit = 2;  // extra attempts on parse failures

    int resolved_max_tokens(bool use_cot) const {
        if (max_output_tokens) return *max_output_tokens;
        return use_cot ? 512 : 8;
    }
    void validate() const;
};

// One completion from the backend, with token usage when the server reports
// it.
struct ChatResult {
    std::string content;
    std::optional<int> prompt_tokens;
    std::optional<int> completion_tokens;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    // One chat-completion request (system + user). Throws TransportError.
    virtual ChatResult complete(const RenderedPrompt& prompt) = 0;
};

// OpenAI-compatible chat-completions client over HTTP.
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(const BackendConfig& config);
    ChatResult complete(const RenderedPrompt& prompt) override;

private:
    BackendConfig config_;
    std::string base_url_;
    std::string path_;
};

struct ParsedScore {
    std::optional<RelevanceGrade> grade;
    std::optional<JudgeError> error;  // ParseFailure or OutOfRange
};

// Finds the last case-insensitive "score" in the completion, skips optional
// colon/whitespace, reads one integer. Distinct errors for "no verdict"
// (ParseFailure) and "verdict outside the scale" (OutOfRange).
ParsedScore parse_score(const std::string& raw, int scale_min = 1, int scale_max = 4);

struct JudgeOutcome {
    std::optional<RelevanceGrade> grade;
    std::optional<JudgeError> error;
    std::string raw_output;  // verbatim last completion; empty if transport failed
    int attempts = 0;
};

// Judges one pair, retrying parse failures with the identical prompt up to
// retry_limit extra attempts. Never fabricates a grade.
JudgeOutcome judge_pair(const RenderedPrompt& prompt, ChatBackend& backend,
                        int retry_limit = 2);

// ---- journal -------------------------------------------------------------

struct JournalEntry {
    std::string query_id;
    std::string doc_id;
    std::optional<RelevanceGrade> predicted;
    std::optional<JudgeError> error;
    std::string raw_output;
    std::string timestamp;
};

class JournalWriter {
public:
    JournalWriter(const std::filesystem::path& path, bool append);
    void append(const JournalEntry& entry);  // thread-safe, flushed per record

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

std::vector<JournalEntry> load_journal(const std::filesystem::path& path);

// Collapses journal entries into the judgment map the rescaler consumes
// (last entry per pair wins).
JudgmentMap journal_judgments(const std::vector<JournalEntry>& entries);

// ---- batch driver ----------------------------------------------------------

struct BatchOptions {
    std::filesystem::path journal_path;  // empty -> no journal
    bool resume = false;                 // skip pairs already in the journal
    double abort_failure_rate = 1.0;     // abort when the observed rate exceeds this
    int abort_min_completed = 20;        // ... after at least this many completions
};

// Judges every pair in the dataset. Order is preserved, at most
// config.max_in_flight requests are outstanding, and every judged pair is
// appended to the journal before the call returns. Throws AbortError when the
// failure rate crosses the threshold (partial results stay persisted).
std::vector<QueryGroup> judge_batch(const EvalDataset& dataset,
                                    const PromptConfig& prompt_config,
                                    ChatBackend& backend, const BackendConfig& backend_config,
                                    const std::vector<FewShotExample>& shots = {},
                                    const BatchOptions& options = {});

// ---- throughput ------------------------------------------------------------

struct ThroughputReport {
    std::string method_tag;
    std::int64_t prompt_count = 0;
    double mean_prompt_length_tokens = 0.0;
    double mean_predicted_length_tokens = 0.0;
    double wall_seconds = 0.0;
    double prompts_per_second = 0.0;
    bool approximate_token_counts = false;  // chars/4 fallback was used
    bool small_sample = false;              // fewer than 100 prompts
};

// Wall-clock throughput over the whole batch. Token lengths come from backend
// usage metadata when every response carried it, otherwise from a chars/4
// approximation (flagged).
ThroughputReport bench_throughput(const EvalDataset& dataset,
                                  const PromptConfig& prompt_config, ChatBackend& backend,
                                  const BackendConfig& backend_config,
                                  const std::vector<FewShotExample>& shots = {});

}  // namespace relkit
