#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "relkit/types.hpp"

namespace relkit {

struct GradePair {
    RelevanceGrade gold;
    RelevanceGrade predicted;
};

// 4x4 matrix indexed [gold][predicted], grades 1-4 mapped to rows/cols 0-3.
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, 4>, 4> counts{};

    void add(RelevanceGrade gold, RelevanceGrade predicted) {
        ++counts[gold.value() - 1][predicted.value() - 1];
    }
    std::int64_t total() const;
    std::int64_t row_sum(int row) const;
    std::int64_t col_sum(int col) const;
    std::int64_t diagonal() const;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool absent = false;  // class appears on neither axis
};

struct PerClassReport {
    std::map<int, ClassMetrics> per_class;  // grade -> metrics
    double accuracy = 0.0;
};

struct AgreementReport {
    double mae_binary = 0.0;  // == 1 - accuracy
    double kappa = 0.0;
    double mean_tau = 0.0;
    int tau_query_count = 0;     // queries contributing a defined tau
    int tau_excluded_count = 0;  // fully tied / too small queries
    ConfusionMatrix confusion;
    PerClassReport classes;
    double accuracy = 0.0;
    std::int64_t compared_pairs = 0;
    std::int64_t excluded_pairs = 0;  // judge errors / missing predictions
};

// Mean of the 0/1 disagreement indicator.
double binary_mae(std::span<const GradePair> pairs);

// Chance-corrected agreement from the two marginal distributions. The
// degenerate case p_e == 1 (both raters the same constant) is defined as 1.
double cohens_kappa(std::span<const GradePair> pairs);

// Tie-corrected rank correlation (tau_b) over all document pairs within one
// SERP. nullopt when either side is fully tied (denominator zero).
std::optional<double> kendall_tau_b(std::span<const RelevanceGrade> gold,
                                    std::span<const RelevanceGrade> predicted);

struct MeanTau {
    double value = 0.0;
    int counted_queries = 0;
    int excluded_queries = 0;
};

// Unweighted mean of per-query tau over queries where tau is defined.
MeanTau mean_tau(const std::vector<QueryGroup>& groups);

// One-vs-rest precision/recall/F1 per grade plus overall accuracy.
PerClassReport per_class_metrics(const ConfusionMatrix& confusion);

// Full pointwise + listwise agreement suite over judged groups. Pairs with a
// judge error or missing prediction are excluded and counted.
AgreementReport agreement_report(const std::vector<QueryGroup>& groups);

}  // namespace relkit
