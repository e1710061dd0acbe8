#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relkit/errors.hpp"

namespace relkit {

// The 1-4 judgment scale shared by human raters and the LLM judge.
// 1 = Not Relevant, 2 = Partly Relevant, 3 = Relevant, 4 = Fully Relevant.
// No other value is representable.
class RelevanceGrade {
public:
    static constexpr int kMin = 1;
    static constexpr int kMax = 4;

    static RelevanceGrade checked(int value) {
        if (value < kMin || value > kMax) {
            throw ValidationError("relevance grade " + std::to_string(value) +
                                  " outside scale [" + std::to_string(kMin) + "," +
                                  std::to_string(kMax) + "]");
        }
        return RelevanceGrade(value);
    }

    int value() const { return value_; }

    const char* name() const {
        switch (value_) {
            case 1: return "Not Relevant";
            case 2: return "Partly Relevant";
            case 3: return "Relevant";
            default: return "Fully Relevant";
        }
    }

    friend bool operator==(RelevanceGrade a, RelevanceGrade b) { return a.value_ == b.value_; }
    friend bool operator!=(RelevanceGrade a, RelevanceGrade b) { return a.value_ != b.value_; }
    friend bool operator<(RelevanceGrade a, RelevanceGrade b) { return a.value_ < b.value_; }

private:
    explicit RelevanceGrade(int v) : value_(v) {}
    int value_;
};

// Probability estimates over the three classic query intents.
struct IntentDistribution {
    double navigational = 0.0;
    double informational = 0.0;
    double transactional = 0.0;

    // Components in [0,1], sum within 1e-6 of 1.
    void validate() const;
};

struct Document {
    std::string id;       // non-empty, unique within a dataset
    std::string url;      // may be empty
    std::string title;    // may be empty, never absent
    std::string content;  // extracted text, may be empty
    std::optional<std::string> meta_description;

    friend bool operator==(const Document&, const Document&) = default;
};

struct Query {
    std::string id;
    std::string text;  // non-empty
    std::optional<IntentDistribution> intent;
};

enum class JudgeError {
    ParseFailure,  // completion had no usable "Score" verdict
    OutOfRange,    // the verdict was an integer outside the scale
    Transport,     // backend unreachable / HTTP failure / timeout
    Aborted,       // batch stopped before this pair was judged
};

const char* to_string(JudgeError e);
JudgeError judge_error_from_string(const std::string& s);

// One query-document judgment. At most one of {predicted, error} is set after
// judging; raw_output keeps the verbatim model completion whenever a model
// was called.
struct JudgedPair {
    std::string query_id;
    std::string document_id;
    std::optional<RelevanceGrade> gold;
    std::optional<RelevanceGrade> predicted;
    std::optional<std::string> raw_output;
    std::optional<JudgeError> error;
};

// A query plus its judged documents -- one SERP, the unit of listwise
// evaluation and bootstrap resampling.
struct QueryGroup {
    Query query;
    std::vector<JudgedPair> pairs;  // document_ids distinct within the group
};

// The five-level tier of the ranking training data. The numeric code is the
// tier's gold gain level on the original scale.
enum class RankingTier : int {
    SoftNeg = 0,
    HardNeg = 1,
    Pos1 = 2,
    Pos2 = 3,
    Pos3 = 4,
};

const char* to_string(RankingTier t);
RankingTier tier_from_string(const std::string& s);

// The three refinement buckets for the hard-negative stratum.
enum class RescaleBucket {
    SLN,  // soft-like negative, judge grade 1
    HN,   // true hard negative, judge grade 2
    FHN,  // false hard negative, judge grade 3 or 4
};

const char* to_string(RescaleBucket b);
RescaleBucket bucket_from_string(const std::string& s);

// One tiered training pair. `rescaled` is set only when tier == HardNeg.
struct RankingExample {
    std::string query_id;
    std::string document_id;
    std::string title;
    std::string content;
    RankingTier tier = RankingTier::SoftNeg;
    std::optional<RescaleBucket> rescaled;

    friend bool operator==(const RankingExample&, const RankingExample&) = default;
};

struct DatasetStats {
    std::int64_t query_count = 0;
    std::int64_t pair_count = 0;
    std::map<int, std::int64_t> per_class_counts;  // grade -> count, all four grades present
    double avg_docs_per_query = 0.0;

    double percentage(int grade) const;
};

}  // namespace relkit
