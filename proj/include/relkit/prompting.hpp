#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relkit/types.hpp"

namespace relkit {

// Ablation switches for the grading prompt. Rendering is a pure function of
// (query, document, config, shots).
struct PromptConfig {
    bool use_url = false;
    bool use_intent = false;
    bool use_cot = false;
    int few_shot = 0;              // 0, 4 or 8 class-balanced examples
    int content_truncation = 250;  // characters, cut at a character boundary

    static constexpr int kScaleMin = 1;
    static constexpr int kScaleMax = 4;

    void validate() const;
    // Short tag like "url_intent_fs8" or "plain_cot"; names golden files and
    // bench table rows.
    std::string tag() const;
};

// One graded example rendered into the few-shot block. Indices within a
// rendered prompt are consecutive from 1.
struct FewShotExample {
    int index = 0;
    std::string query_text;
    Document doc;
    RelevanceGrade gold = RelevanceGrade::checked(1);
};

// A pool entry select_fewshot can draw from.
struct LabeledExample {
    std::string query_text;
    Document doc;
    RelevanceGrade gold = RelevanceGrade::checked(1);
};

struct RenderedPrompt {
    std::string system_text;
    std::string user_text;
    PromptConfig config_echo;

    std::size_t char_count() const { return system_text.size() + user_text.size(); }
};

// Renders the four-part grading prompt. shots.size() must equal
// config.few_shot; use_intent requires query.intent.
RenderedPrompt render_prompt(const Query& query, const Document& doc,
                             const PromptConfig& config,
                             const std::vector<FewShotExample>& shots = {});

// Picks k/4 examples per grade from the pool. Presentation order is fixed
// ascending-grade cycles (1,2,3,4,1,2,3,4) regardless of seed; the seed only
// selects which pool entries fill the slots.
std::vector<FewShotExample> select_fewshot(const std::vector<LabeledExample>& pool, int k,
                                           std::uint64_t seed);

// Three lines "<intent> (<definition>): <pct to 1 decimal>%".
std::string render_intent_block(const IntentDistribution& intent);

}  // namespace relkit
