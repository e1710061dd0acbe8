#include "relkit/rescale.hpp"

namespace relkit {

RescaleBucket bucket_of(RelevanceGrade grade) {
    switch (grade.value()) {
        case 1: return RescaleBucket::SLN;
        case 2: return RescaleBucket::HN;
        default: return RescaleBucket::FHN;  // 3 and 4
    }
}

std::pair<RankingDataset, RescaleReport> rescale_dataset(const RankingDataset& dataset,
                                                         const JudgmentMap& judgments) {
    if (dataset.split == DatasetSplit::Validation) {
        throw ValidationError("refusing to rescale a validation-flagged dataset");
    }

    RankingDataset out = dataset;
    RescaleReport report;
    std::int64_t sln = 0, hn = 0, fhn = 0;
    std::string missing;
    int missing_count = 0;

    for (RankingGroup& group : out.groups) {
        for (RankingExample& example : group.examples) {
            if (example.tier != RankingTier::HardNeg) {
                continue;  // positives and soft negatives are never rescaled
            }
            ++report.total_hard_negatives;
            auto it = judgments.find({example.query_id, example.document_id});
            if (it == judgments.end()) {
                if (missing_count < 10) {
                    if (!missing.empty()) missing += ", ";
                    missing += "(" + example.query_id + ", " + example.document_id + ")";
                }
                ++missing_count;
                continue;
            }
            if (it->second.error || !it->second.grade) {
                // Keeps its original hard-negative slot; auditable via the count.
                example.rescaled.reset();
                ++report.error_count;
                continue;
            }
            example.rescaled = bucket_of(*it->second.grade);
            ++report.judged;
            switch (*example.rescaled) {
                case RescaleBucket::SLN: ++sln; break;
                case RescaleBucket::HN: ++hn; break;
                case RescaleBucket::FHN: ++fhn; break;
            }
        }
    }

    if (missing_count > 0) {
        throw ValidationError("missing judgments for " + std::to_string(missing_count) +
                              " hard negatives: " + missing +
                              (missing_count > 10 ? ", ..." : ""));
    }

    if (report.judged > 0) {
        const double denom = static_cast<double>(report.judged);
        report.pct_sln = 100.0 * static_cast<double>(sln) / denom;
        report.pct_hn = 100.0 * static_cast<double>(hn) / denom;
        report.pct_fhn = 100.0 * static_cast<double>(fhn) / denom;
    }
    return {std::move(out), report};
}

int rescaled_gain(const RankingExample& example) {
    if (example.tier == RankingTier::HardNeg && example.rescaled) {
        switch (*example.rescaled) {
            case RescaleBucket::SLN: return 1;
            case RescaleBucket::HN: return 2;
            case RescaleBucket::FHN: return 3;
        }
    }
    return tier_ladder_gain(example.tier);
}

int tier_ladder_gain(RankingTier tier) {
    switch (tier) {
        case RankingTier::SoftNeg: return 0;
        case RankingTier::HardNeg: return 2;  // the ladder's HN slot
        case RankingTier::Pos1: return 4;
        case RankingTier::Pos2: return 5;
        case RankingTier::Pos3: return 6;
    }
    return 0;
}

}  // namespace relkit
