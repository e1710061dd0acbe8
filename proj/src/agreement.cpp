#include "relkit/agreement.hpp"

#include <cmath>

namespace relkit {

std::int64_t ConfusionMatrix::total() const {
    std::int64_t n = 0;
    for (const auto& row : counts) {
        for (std::int64_t c : row) n += c;
    }
    return n;
}

std::int64_t ConfusionMatrix::row_sum(int row) const {
    std::int64_t n = 0;
    for (std::int64_t c : counts[row]) n += c;
    return n;
}

std::int64_t ConfusionMatrix::col_sum(int col) const {
    std::int64_t n = 0;
    for (const auto& row : counts) n += row[col];
    return n;
}

std::int64_t ConfusionMatrix::diagonal() const {
    std::int64_t n = 0;
    for (int i = 0; i < 4; ++i) n += counts[i][i];
    return n;
}

double binary_mae(std::span<const GradePair> pairs) {
    if (pairs.empty()) {
        throw ValidationError("binary_mae: empty input");
    }
    std::int64_t disagreements = 0;
    for (const GradePair& p : pairs) {
        if (!(p.gold == p.predicted)) ++disagreements;
    }
    return static_cast<double>(disagreements) / static_cast<double>(pairs.size());
}

double cohens_kappa(std::span<const GradePair> pairs) {
    if (pairs.empty()) {
        throw ValidationError("cohens_kappa: empty input");
    }
    ConfusionMatrix cm;
    for (const GradePair& p : pairs) cm.add(p.gold, p.predicted);
    const std::int64_t n = cm.total();

    // Integer numerators keep the degenerate p_e == 1 test exact.
    std::int64_t pe_num = 0;
    for (int g = 0; g < 4; ++g) {
        pe_num += cm.row_sum(g) * cm.col_sum(g);
    }
    const std::int64_t po_num = cm.diagonal();
    if (pe_num == n * n) {
        // Both raters are the same constant function; p_o is forced to 1.
        return 1.0;
    }
    const double po = static_cast<double>(po_num) / static_cast<double>(n);
    const double pe = static_cast<double>(pe_num) / static_cast<double>(n) /
                      static_cast<double>(n);
    return (po - pe) / (1.0 - pe);
}

std::optional<double> kendall_tau_b(std::span<const RelevanceGrade> gold,
                                    std::span<const RelevanceGrade> predicted) {
    if (gold.size() != predicted.size()) {
        throw ValidationError("kendall_tau_b: length mismatch");
    }
    const std::size_t n = gold.size();
    if (n < 2) {
        throw ValidationError("kendall_tau_b: need at least 2 items");
    }

    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int dx = gold[i].value() - gold[j].value();
            const int dy = predicted[i].value() - predicted[j].value();
            if (dx != 0 && dy != 0) {
                if ((dx > 0) == (dy > 0)) {
                    ++concordant;
                } else {
                    ++discordant;
                }
            }
        }
    }

    // Tie corrections from the grade histograms.
    auto tie_pairs = [](std::span<const RelevanceGrade> values) {
        std::array<std::int64_t, 4> hist{};
        for (RelevanceGrade g : values) ++hist[g.value() - 1];
        std::int64_t t = 0;
        for (std::int64_t c : hist) t += c * (c - 1) / 2;
        return t;
    };
    const std::int64_t n0 = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
    const std::int64_t n1 = tie_pairs(gold);
    const std::int64_t n2 = tie_pairs(predicted);
    if (n1 == n0 || n2 == n0) {
        return std::nullopt;  // one side fully tied
    }
    return static_cast<double>(concordant - discordant) /
           std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
}

namespace {

// Comparable grade vectors for one group; pairs with errors or missing
// predictions are dropped (and tallied by the caller).
struct GroupGrades {
    std::vector<RelevanceGrade> gold;
    std::vector<RelevanceGrade> predicted;
};

GroupGrades comparable_grades(const QueryGroup& group, std::int64_t* excluded) {
    GroupGrades out;
    for (const JudgedPair& pair : group.pairs) {
        if (pair.gold && pair.predicted) {
            out.gold.push_back(*pair.gold);
            out.predicted.push_back(*pair.predicted);
        } else if (excluded != nullptr) {
            ++*excluded;
        }
    }
    return out;
}

}  // namespace

MeanTau mean_tau(const std::vector<QueryGroup>& groups) {
    MeanTau result;
    double sum = 0.0;
    for (const QueryGroup& group : groups) {
        GroupGrades grades = comparable_grades(group, nullptr);
        if (grades.gold.size() < 2) {
            ++result.excluded_queries;
            continue;
        }
        const auto tau = kendall_tau_b(grades.gold, grades.predicted);
        if (!tau) {
            ++result.excluded_queries;
            continue;
        }
        sum += *tau;
        ++result.counted_queries;
    }
    if (result.counted_queries == 0) {
        throw ValidationError("mean_tau: no query yields a defined tau");
    }
    result.value = sum / result.counted_queries;
    return result;
}

PerClassReport per_class_metrics(const ConfusionMatrix& confusion) {
    PerClassReport report;
    const std::int64_t total = confusion.total();
    if (total == 0) {
        throw ValidationError("per_class_metrics: empty confusion matrix");
    }
    for (int g = 0; g < 4; ++g) {
        ClassMetrics m;
        const std::int64_t row = confusion.row_sum(g);
        const std::int64_t col = confusion.col_sum(g);
        const std::int64_t hit = confusion.counts[g][g];
        if (row == 0 && col == 0) {
            m.absent = true;
        } else {
            m.precision = col == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(col);
            m.recall = row == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(row);
            m.f1 = (m.precision + m.recall) == 0.0
                       ? 0.0
                       : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        }
        report.per_class[g + 1] = m;
    }
    report.accuracy = static_cast<double>(confusion.diagonal()) / static_cast<double>(total);
    return report;
}

AgreementReport agreement_report(const std::vector<QueryGroup>& groups) {
    AgreementReport report;

    std::vector<GradePair> pooled;
    for (const QueryGroup& group : groups) {
        GroupGrades grades = comparable_grades(group, &report.excluded_pairs);
        for (std::size_t i = 0; i < grades.gold.size(); ++i) {
            pooled.push_back(GradePair{grades.gold[i], grades.predicted[i]});
            report.confusion.add(grades.gold[i], grades.predicted[i]);
        }
    }
    if (pooled.empty()) {
        throw ValidationError("agreement_report: zero comparable pairs");
    }
    report.compared_pairs = static_cast<std::int64_t>(pooled.size());
    report.mae_binary = binary_mae(pooled);
    report.kappa = cohens_kappa(pooled);
    report.classes = per_class_metrics(report.confusion);
    // Derived rather than recomputed so mae_binary + accuracy == 1 holds
    // bit-exactly.
    report.accuracy = 1.0 - report.mae_binary;

    const MeanTau tau = mean_tau(groups);
    report.mean_tau = tau.value;
    report.tau_query_count = tau.counted_queries;
    report.tau_excluded_count = tau.excluded_queries;
    return report;
}

}  // namespace relkit
