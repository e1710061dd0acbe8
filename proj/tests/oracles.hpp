#pragma once

// Independent brute-force references for the metric implementations. These
// take the most literal route on purpose -- direct probability summation,
// explicit pair classification, permutation enumeration -- and share no code
// with the library paths they check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

inline double kappa(const std::vector<int>& gold, const std::vector<int>& pred) {
    const double n = static_cast<double>(gold.size());
    double p_observed = 0.0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] == pred[i]) p_observed += 1.0;
    }
    p_observed /= n;

    double p_expected = 0.0;
    for (int grade = 1; grade <= 4; ++grade) {
        double gold_share = 0.0;
        double pred_share = 0.0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            if (gold[i] == grade) gold_share += 1.0;
            if (pred[i] == grade) pred_share += 1.0;
        }
        p_expected += (gold_share / n) * (pred_share / n);
    }
    if (p_expected >= 1.0) return 1.0;
    return (p_observed - p_expected) / (1.0 - p_expected);
}

inline std::optional<double> tau_b(const std::vector<int>& gold,
                                   const std::vector<int>& pred) {
    long long concordant = 0, discordant = 0, tied_gold = 0, tied_pred = 0, tied_both = 0;
    const std::size_t n = gold.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int dx = gold[i] - gold[j];
            const int dy = pred[i] - pred[j];
            if (dx == 0 && dy == 0) ++tied_both;
            else if (dx == 0) ++tied_gold;
            else if (dy == 0) ++tied_pred;
            else if ((dx > 0 && dy > 0) || (dx < 0 && dy < 0)) ++concordant;
            else ++discordant;
        }
    }
    const long long total = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
    const long long denom_gold = total - (tied_gold + tied_both);
    const long long denom_pred = total - (tied_pred + tied_both);
    if (denom_gold == 0 || denom_pred == 0) return std::nullopt;
    return static_cast<double>(concordant - discordant) /
           std::sqrt(static_cast<double>(denom_gold) * static_cast<double>(denom_pred));
}

inline double dcg_prefix(const std::vector<int>& gains, int k) {
    double sum = 0.0;
    const int limit = std::min<int>(k, static_cast<int>(gains.size()));
    for (int rank = 1; rank <= limit; ++rank) {
        sum += (std::pow(2.0, gains[static_cast<std::size_t>(rank - 1)]) - 1.0) /
               std::log2(static_cast<double>(rank + 1));
    }
    return sum;
}

// Ideal DCG found by trying every permutation of the list.
inline std::optional<double> ndcg_permutation(const std::vector<int>& gains, int k) {
    std::vector<int> perm = gains;
    std::sort(perm.begin(), perm.end());
    double best = 0.0;
    do {
        best = std::max(best, dcg_prefix(perm, k));
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best == 0.0) return std::nullopt;
    return dcg_prefix(gains, k) / best;
}

// Max reciprocal rank over all relevant docs.
inline double mrr_by_max(const std::vector<int>& gains, int threshold) {
    double best = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (gains[i] >= threshold) {
            best = std::max(best, 1.0 / static_cast<double>(i + 1));
        }
    }
    return best;
}

}  // namespace oracle
