#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relkit/types.hpp"

namespace relkit {

// One system ranking for one query. Order is the system's, descending by
// score with ties broken stably by doc_id.
struct RankedDoc {
    std::string doc_id;
    int gain = 0;  // >= 0, from gold tiers or the rescaled ladder
};

struct RankedList {
    std::string query_id;
    std::vector<RankedDoc> docs;
};

enum class GainFunction {
    Exponential,  // 2^g - 1, the default
    Linear,       // g, for sensitivity checks
};

// DCG@k = sum_{i=1..min(k,n)} gain_fn(g_i) / log2(i+1), normalized by the
// ideal (descending-gain) ordering. nullopt when IDCG == 0.
std::optional<double> ndcg_at_k(const RankedList& list, int k,
                                GainFunction gain_fn = GainFunction::Exponential);

// 1/rank of the first doc with gain >= threshold; 0 when there is none.
double mrr(const RankedList& list, int relevant_threshold);

struct BootstrapCi {
    double mean = 0.0;  // sample mean, not the resample mean
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// Percentile bootstrap over per-query values: resample with replacement
// `iterations` times, take the (1 +/- level)/2 quantiles of the resample
// means. Deterministic for a fixed seed.
BootstrapCi bootstrap_ci(std::span<const double> values, int iterations = 1000,
                         double level = 0.95, std::uint64_t seed = 0);

struct RankEvalReport {
    // metric name ("ndcg@5", ..., "mrr") -> summary; iteration order is the
    // report's row order
    std::vector<std::pair<std::string, BootstrapCi>> metrics;
    int query_count = 0;
    int skipped_queries = 0;  // no relevant doc; excluded from NDCG means

    const BootstrapCi& metric(const std::string& name) const;
};

// Per-query metrics averaged across queries with bootstrap CIs. Skipped
// queries (all gains zero) are excluded from NDCG means but contribute 0 to
// MRR.
RankEvalReport evaluate_run(const std::vector<RankedList>& lists,
                            const std::vector<int>& ks = {5, 10, 30},
                            int relevant_threshold = 4, int iterations = 1000,
                            double level = 0.95, std::uint64_t seed = 0,
                            GainFunction gain_fn = GainFunction::Exponential);

// Ranked-list file: line-delimited {query_id, doc_id, rank, gain}; ranks are
// 1-based and unique within a query.
std::vector<RankedList> load_ranked_lists(const std::filesystem::path& path);
void save_ranked_lists(const std::vector<RankedList>& lists,
                       const std::filesystem::path& path);

}  // namespace relkit
