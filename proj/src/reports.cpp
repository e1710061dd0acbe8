#include "relkit/reports.hpp"

#include <algorithm>
#include <cstdio>

namespace relkit {

namespace {

std::string fixed(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return buf;
}

std::string scientific(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1e", v);
    return buf;
}

}  // namespace

std::string format_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (row.size() > widths.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::string out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            const std::string& cell = rows[r][c];
            out += cell;
            if (c + 1 < rows[r].size()) {
                out.append(widths[c] - cell.size() + 2, ' ');
            }
        }
        out += '\n';
        if (r == 0) {
            std::size_t total = 0;
            for (std::size_t c = 0; c < widths.size(); ++c) {
                total += widths[c] + (c + 1 < widths.size() ? 2 : 0);
            }
            out.append(total, '-');
            out += '\n';
        }
    }
    return out;
}

std::string agreement_table(const std::vector<std::pair<std::string, AgreementReport>>& runs) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"Run", "MAE", "kappa", "tau", "tau queries", "excluded pairs"});
    for (const auto& [name, r] : runs) {
        rows.push_back({name, fixed(r.mae_binary, 2), fixed(r.kappa, 2), fixed(r.mean_tau, 2),
                        std::to_string(r.tau_query_count), std::to_string(r.excluded_pairs)});
    }
    return format_table(rows);
}

json agreement_to_json(const AgreementReport& report) {
    json confusion = json::array();
    for (const auto& row : report.confusion.counts) {
        confusion.push_back(json(row));
    }
    json per_class = json::object();
    for (const auto& [grade, m] : report.classes.per_class) {
        per_class[std::to_string(grade)] = {{"precision", m.precision},
                                            {"recall", m.recall},
                                            {"f1", m.f1},
                                            {"absent", m.absent}};
    }
    return json{
        {"mae_binary", report.mae_binary},
        {"kappa", report.kappa},
        {"mean_tau", report.mean_tau},
        {"tau_query_count", report.tau_query_count},
        {"tau_excluded_count", report.tau_excluded_count},
        {"accuracy", report.accuracy},
        {"compared_pairs", report.compared_pairs},
        {"excluded_pairs", report.excluded_pairs},
        {"confusion", confusion},
        {"per_class", per_class},
    };
}

std::string per_class_csv(const std::vector<std::pair<std::string, AgreementReport>>& runs) {
    std::string out = "run,grade,precision,recall,f1,accuracy\n";
    for (const auto& [name, report] : runs) {
        for (const auto& [grade, m] : report.classes.per_class) {
            out += name + "," + std::to_string(grade) + "," + fixed(m.precision, 6) + "," +
                   fixed(m.recall, 6) + "," + fixed(m.f1, 6) + "," +
                   fixed(report.accuracy, 6) + "\n";
        }
    }
    return out;
}

std::string rescale_table(const RescaleReport& report) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"", "HN -> SLN", "HN -> HN", "HN -> FHN"});
    rows.push_back({"judged hard negatives", fixed(report.pct_sln, 1) + "%",
                    fixed(report.pct_hn, 1) + "%", fixed(report.pct_fhn, 1) + "%"});
    std::string out = format_table(rows);
    out += "total hard negatives: " + std::to_string(report.total_hard_negatives) +
           ", judged: " + std::to_string(report.judged) +
           ", judge errors: " + std::to_string(report.error_count) + "\n";
    return out;
}

json rescale_to_json(const RescaleReport& report) {
    return json{{"total_hard_negatives", report.total_hard_negatives},
                {"judged", report.judged},
                {"error_count", report.error_count},
                {"pct_sln", report.pct_sln},
                {"pct_hn", report.pct_hn},
                {"pct_fhn", report.pct_fhn}};
}

std::string rank_eval_table(const RankEvalReport& report) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"Metric", "Mean", "95% CI", "half-width"});
    for (const auto& [name, ci] : report.metrics) {
        const double half = (ci.ci_high - ci.ci_low) / 2.0;
        rows.push_back({name, fixed(ci.mean, 3),
                        "[" + fixed(ci.ci_low, 4) + ", " + fixed(ci.ci_high, 4) + "]",
                        "+/-" + scientific(half)});
    }
    std::string out = format_table(rows);
    out += "queries: " + std::to_string(report.query_count) +
           ", skipped (no relevant doc): " + std::to_string(report.skipped_queries) + "\n";
    return out;
}

json rank_eval_to_json(const RankEvalReport& report) {
    json metrics = json::object();
    for (const auto& [name, ci] : report.metrics) {
        metrics[name] = {{"mean", ci.mean}, {"ci_low", ci.ci_low}, {"ci_high", ci.ci_high}};
    }
    return json{{"metrics", metrics},
                {"query_count", report.query_count},
                {"skipped_queries", report.skipped_queries}};
}

std::string throughput_table(const std::vector<ThroughputReport>& reports) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"Prompting method"};
    std::vector<std::string> prompt_len = {"Prompt length (tokens)"};
    std::vector<std::string> predicted_len = {"Predicted token length"};
    std::vector<std::string> throughput = {"Throughput (prompts/sec)"};
    for (const ThroughputReport& r : reports) {
        header.push_back(r.method_tag);
        prompt_len.push_back(fixed(r.mean_prompt_length_tokens, 1) +
                             (r.approximate_token_counts ? "~" : ""));
        predicted_len.push_back(fixed(r.mean_predicted_length_tokens, 1) +
                                (r.approximate_token_counts ? "~" : ""));
        throughput.push_back(fixed(r.prompts_per_second, 2));
    }
    rows.push_back(std::move(header));
    rows.push_back(std::move(prompt_len));
    rows.push_back(std::move(predicted_len));
    rows.push_back(std::move(throughput));
    std::string out = format_table(rows);
    for (const ThroughputReport& r : reports) {
        if (r.small_sample) {
            out += "note: " + r.method_tag + " measured on only " +
                   std::to_string(r.prompt_count) + " prompts; estimate may be unstable\n";
        }
    }
    return out;
}

json throughput_to_json(const std::vector<ThroughputReport>& reports) {
    json out = json::array();
    for (const ThroughputReport& r : reports) {
        out.push_back(json{{"method", r.method_tag},
                           {"prompt_count", r.prompt_count},
                           {"mean_prompt_length_tokens", r.mean_prompt_length_tokens},
                           {"mean_predicted_length_tokens", r.mean_predicted_length_tokens},
                           {"wall_seconds", r.wall_seconds},
                           {"prompts_per_second", r.prompts_per_second},
                           {"approximate_token_counts", r.approximate_token_counts},
                           {"small_sample", r.small_sample}});
    }
    return out;
}

std::string comparison_table(const ComparisonReport& report) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"Dim", "Rescaling", "NDCG@5", "NDCG@10", "NDCG@30", "MRR"});
    for (int dim : report.config.eval_dims) {
        for (const ConditionResult& c : report.conditions) {
            const RankEvalReport& eval = c.at_dim(dim);
            std::vector<std::string> row = {std::to_string(dim), c.name};
            for (const char* metric : {"ndcg@5", "ndcg@10", "ndcg@30", "mrr"}) {
                const BootstrapCi& ci = eval.metric(metric);
                const double half = (ci.ci_high - ci.ci_low) / 2.0;
                row.push_back(fixed(ci.mean, 3) + " +/-" + scientific(half));
            }
            rows.push_back(std::move(row));
        }
    }
    std::string out = format_table(rows);
    for (const ConditionResult& c : report.conditions) {
        if (c.rescale) {
            out += c.name + " rescaling: " + fixed(c.rescale->pct_sln, 1) + "% SLN, " +
                   fixed(c.rescale->pct_hn, 1) + "% HN, " + fixed(c.rescale->pct_fhn, 1) +
                   "% FHN over " + std::to_string(c.rescale->judged) + " hard negatives\n";
        }
    }
    return out;
}

}  // namespace relkit
