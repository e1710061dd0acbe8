#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "relkit/dataset.hpp"
#include "relkit/types.hpp"

namespace relkit {

// Grade -> refinement bucket: 1 -> SLN, 2 -> HN, 3 -> FHN, 4 -> FHN.
RescaleBucket bucket_of(RelevanceGrade grade);

// Outcome of judging one (query, doc) pair; exactly one of grade/error set.
struct Judgment {
    std::optional<RelevanceGrade> grade;
    std::optional<JudgeError> error;
};

using PairKey = std::pair<std::string, std::string>;  // (query_id, doc_id)
using JudgmentMap = std::map<PairKey, Judgment>;

struct RescaleReport {
    std::int64_t total_hard_negatives = 0;
    std::int64_t judged = 0;       // hard negatives with a usable grade
    std::int64_t error_count = 0;  // hard negatives whose judgment errored
    double pct_sln = 0.0;          // percentages over judged hard negatives
    double pct_hn = 0.0;
    double pct_fhn = 0.0;
};

// Annotates hard-negative examples with their judged bucket. Non-hard-negative
// tiers pass through untouched (spurious judgments ignored); judge-errored
// hard negatives keep their tier and count toward error_count. Refuses
// validation-flagged datasets.
std::pair<RankingDataset, RescaleReport> rescale_dataset(const RankingDataset& dataset,
                                                         const JudgmentMap& judgments);

// The 7-level gain ladder shared by original and rescaled datasets:
// SoftNeg=0 < SLN=1 < HN=2 < FHN=3 < Pos1=4 < Pos2=5 < Pos3=6.
// Un-rescaled hard negatives sit at the HN slot.
int rescaled_gain(const RankingExample& example);

// Ladder gain of a bare tier (no rescale annotation).
int tier_ladder_gain(RankingTier tier);

}  // namespace relkit
