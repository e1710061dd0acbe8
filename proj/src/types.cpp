#include "relkit/types.hpp"

#include <cmath>

namespace relkit {

void IntentDistribution::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(navigational) || !in_unit(informational) || !in_unit(transactional)) {
        throw ValidationError("intent probabilities must lie in [0,1]");
    }
    const double sum = navigational + informational + transactional;
    if (std::abs(sum - 1.0) > 1e-6) {
        throw ValidationError("intent probabilities sum to " + std::to_string(sum) +
                              ", expected 1");
    }
}

const char* to_string(JudgeError e) {
    switch (e) {
        case JudgeError::ParseFailure: return "parse_failure";
        case JudgeError::OutOfRange: return "out_of_range";
        case JudgeError::Transport: return "transport";
        case JudgeError::Aborted: return "aborted";
    }
    return "unknown";
}

JudgeError judge_error_from_string(const std::string& s) {
    if (s == "parse_failure") return JudgeError::ParseFailure;
    if (s == "out_of_range") return JudgeError::OutOfRange;
    if (s == "transport") return JudgeError::Transport;
    if (s == "aborted") return JudgeError::Aborted;
    throw ValidationError("unknown judge error code '" + s + "'");
}

const char* to_string(RankingTier t) {
    switch (t) {
        case RankingTier::SoftNeg: return "soft_neg";
        case RankingTier::HardNeg: return "hard_neg";
        case RankingTier::Pos1: return "pos1";
        case RankingTier::Pos2: return "pos2";
        case RankingTier::Pos3: return "pos3";
    }
    return "unknown";
}

RankingTier tier_from_string(const std::string& s) {
    if (s == "soft_neg") return RankingTier::SoftNeg;
    if (s == "hard_neg") return RankingTier::HardNeg;
    if (s == "pos1") return RankingTier::Pos1;
    if (s == "pos2") return RankingTier::Pos2;
    if (s == "pos3") return RankingTier::Pos3;
    throw ValidationError("unknown ranking tier '" + s + "'");
}

const char* to_string(RescaleBucket b) {
    switch (b) {
        case RescaleBucket::SLN: return "sln";
        case RescaleBucket::HN: return "hn";
        case RescaleBucket::FHN: return "fhn";
    }
    return "unknown";
}

RescaleBucket bucket_from_string(const std::string& s) {
    if (s == "sln") return RescaleBucket::SLN;
    if (s == "hn") return RescaleBucket::HN;
    if (s == "fhn") return RescaleBucket::FHN;
    throw ValidationError("unknown rescale bucket '" + s + "'");
}

double DatasetStats::percentage(int grade) const {
    if (pair_count == 0) return 0.0;
    auto it = per_class_counts.find(grade);
    const double count = it == per_class_counts.end() ? 0.0 : static_cast<double>(it->second);
    return 100.0 * count / static_cast<double>(pair_count);
}

}  // namespace relkit
