#include "relkit/prompting.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "relkit/rng.hpp"

namespace relkit {

namespace {

// Canonical wording, frozen by the golden files under tests/golden/prompts/.
// Changing any of these strings is a breaking change to every committed
// rendering.
constexpr const char* kSystemText =
    "You are a search quality rater evaluating the relevance of web pages. Given a query "
    "and a web page, you must provide a score on an integer scale of 1 to 4 with the "
    "following meanings:\n"
    "4 = Fully Relevant: the page directly and completely answers the query; on its own it "
    "fully satisfies the user.\n"
    "3 = Relevant: the page answers the query but is less complete, less authoritative, or "
    "mixed with unrelated material.\n"
    "2 = Partly Relevant: the page is related to the query yet answers it only partially or "
    "indirectly.\n"
    "1 = Not Relevant: the page does not help with the query at all.\n"
    "In other words: 4 is a perfect result, 3 is a good result, 2 is a marginal result, and "
    "1 is a useless result.\n"
    "The score must be a whole number between 1 and 4. Never answer with a score outside "
    "the 1 to 4 range.";

constexpr const char* kFinalInstruction =
    "Answer with \"Score: <value>\" where <value> is your relevance score from 1 to 4.";

constexpr const char* kCotInstruction =
    "First explain step by step how well the page satisfies the query, then state your "
    "final score.";

constexpr std::array<const char*, 3> kIntentNames = {"navigational", "informational",
                                                     "transactional"};
constexpr std::array<const char*, 3> kIntentDefinitions = {
    "the user wants to reach a specific website or page",
    "the user wants to find information on a topic",
    "the user wants to perform an action such as buying or downloading"};

// Cuts after `limit` characters, never inside a UTF-8 sequence. Counts
// codepoints, so byte length can exceed `limit` for non-ASCII text.
std::string truncate_content(const std::string& content, int limit) {
    if (content.empty()) return "(no content)";
    int chars = 0;
    std::size_t i = 0;
    while (i < content.size() && chars < limit) {
        const auto byte = static_cast<unsigned char>(content[i]);
        std::size_t len = 1;
        if ((byte & 0xE0) == 0xC0) len = 2;
        else if ((byte & 0xF0) == 0xE0) len = 3;
        else if ((byte & 0xF8) == 0xF0) len = 4;
        i = std::min(content.size(), i + len);
        ++chars;
    }
    if (i >= content.size()) return content;
    return content.substr(0, i);
}

// The document block shared by few-shot examples and the page under judgment.
void append_document_block(std::string& out, const Document& doc, const PromptConfig& config) {
    if (config.use_url) {
        out += "URL: " + doc.url + "\n";
    }
    out += "Title: " + doc.title + "\n";
    out += "Content: " + truncate_content(doc.content, config.content_truncation) + "\n";
    if (doc.meta_description) {
        out += "Meta description: " + *doc.meta_description + "\n";
    }
}

}  // namespace

void PromptConfig::validate() const {
    if (few_shot != 0 && few_shot != 4 && few_shot != 8) {
        throw ValidationError("few_shot must be 0, 4 or 8 (got " + std::to_string(few_shot) +
                              ")");
    }
    if (content_truncation < 1) {
        throw ValidationError("content_truncation must be >= 1");
    }
}

std::string PromptConfig::tag() const {
    std::string t;
    if (use_url) t += "url";
    if (use_intent) t += t.empty() ? "intent" : "_intent";
    if (t.empty()) t = "plain";
    if (few_shot > 0) t += "_fs" + std::to_string(few_shot);
    if (use_cot) t += "_cot";
    return t;
}

std::string render_intent_block(const IntentDistribution& intent) {
    intent.validate();
    const std::array<double, 3> values = {intent.navigational, intent.informational,
                                          intent.transactional};
    std::string out;
    for (int i = 0; i < 3; ++i) {
        char pct[32];
        std::snprintf(pct, sizeof(pct), "%.1f", values[static_cast<std::size_t>(i)] * 100.0);
        out += std::string(kIntentNames[static_cast<std::size_t>(i)]) + " (" +
               kIntentDefinitions[static_cast<std::size_t>(i)] + "): " + pct + "%\n";
    }
    return out;
}

RenderedPrompt render_prompt(const Query& query, const Document& doc,
                             const PromptConfig& config,
                             const std::vector<FewShotExample>& shots) {
    config.validate();
    if (static_cast<int>(shots.size()) != config.few_shot) {
        throw ValidationError("render_prompt: got " + std::to_string(shots.size()) +
                              " shots, config asks for " + std::to_string(config.few_shot));
    }
    if (config.use_intent && !query.intent) {
        throw ValidationError("render_prompt: use_intent set but query '" + query.id +
                              "' has no intent distribution");
    }

    RenderedPrompt prompt;
    prompt.system_text = kSystemText;
    prompt.config_echo = config;

    std::string& user = prompt.user_text;
    if (!shots.empty()) {
        user += "Here are " + std::to_string(shots.size()) + " example judgments:\n\n";
        int expected_index = 1;
        for (const FewShotExample& shot : shots) {
            if (shot.index != expected_index) {
                throw ValidationError("few-shot indices must run 1.." +
                                      std::to_string(shots.size()) + " consecutively");
            }
            ++expected_index;
            user += "Example " + std::to_string(shot.index) + "\n";
            user += "Query: " + shot.query_text + "\n";
            append_document_block(user, shot.doc, config);
            user += "Score: " + std::to_string(shot.gold.value()) + "\n\n";
        }
        user += "Now judge the following page.\n";
    }

    user += "Query: " + query.text + "\n";
    if (config.use_intent) {
        user += "Query intent estimates:\n";
        user += render_intent_block(*query.intent);
    }
    append_document_block(user, doc, config);
    if (config.use_cot) {
        user += std::string(kCotInstruction) + "\n";
    }
    user += kFinalInstruction;
    return prompt;
}

std::vector<FewShotExample> select_fewshot(const std::vector<LabeledExample>& pool, int k,
                                           std::uint64_t seed) {
    if (k != 4 && k != 8) {
        throw ValidationError("select_fewshot: k must be 4 or 8");
    }
    const int per_grade = k / 4;

    std::array<std::vector<std::size_t>, 4> by_grade;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        by_grade[static_cast<std::size_t>(pool[i].gold.value() - 1)].push_back(i);
    }
    for (int g = 0; g < 4; ++g) {
        if (static_cast<int>(by_grade[static_cast<std::size_t>(g)].size()) < per_grade) {
            throw ValidationError("select_fewshot: pool has only " +
                                  std::to_string(by_grade[static_cast<std::size_t>(g)].size()) +
                                  " examples of grade " + std::to_string(g + 1) + ", need " +
                                  std::to_string(per_grade));
        }
    }

    // The seed picks which pool entries fill the slots; the presentation order
    // stays fixed ascending-grade cycles.
    Rng rng(mix_seed(seed, "fewshot"));
    for (auto& ids : by_grade) rng.shuffle(ids);

    std::vector<FewShotExample> shots;
    shots.reserve(static_cast<std::size_t>(k));
    for (int cycle = 0; cycle < per_grade; ++cycle) {
        for (int g = 0; g < 4; ++g) {
            const LabeledExample& src =
                pool[by_grade[static_cast<std::size_t>(g)][static_cast<std::size_t>(cycle)]];
            FewShotExample shot;
            shot.index = static_cast<int>(shots.size()) + 1;
            shot.query_text = src.query_text;
            shot.doc = src.doc;
            shot.gold = src.gold;
            shots.push_back(std::move(shot));
        }
    }
    return shots;
}

}  // namespace relkit
