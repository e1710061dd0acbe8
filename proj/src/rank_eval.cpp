#include "relkit/rank_eval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "relkit/jsonl.hpp"
#include "relkit/rng.hpp"

namespace relkit {

namespace {

double gain_value(int g, GainFunction fn) {
    if (fn == GainFunction::Linear) return static_cast<double>(g);
    return std::exp2(static_cast<double>(g)) - 1.0;
}

double dcg(std::span<const int> gains, int k, GainFunction fn) {
    const std::size_t limit = std::min<std::size_t>(gains.size(), static_cast<std::size_t>(k));
    double sum = 0.0;
    for (std::size_t i = 0; i < limit; ++i) {
        sum += gain_value(gains[i], fn) / std::log2(static_cast<double>(i) + 2.0);
    }
    return sum;
}

}  // namespace

std::optional<double> ndcg_at_k(const RankedList& list, int k, GainFunction gain_fn) {
    if (k < 1) {
        throw ValidationError("ndcg_at_k: k must be >= 1");
    }
    std::vector<int> gains;
    gains.reserve(list.docs.size());
    for (const RankedDoc& d : list.docs) {
        if (d.gain < 0) {
            throw ValidationError("ndcg_at_k: negative gain");
        }
        gains.push_back(d.gain);
    }
    std::vector<int> ideal = gains;
    std::sort(ideal.begin(), ideal.end(), std::greater<int>());
    const double idcg = dcg(ideal, k, gain_fn);
    if (idcg == 0.0) {
        return std::nullopt;
    }
    return dcg(gains, k, gain_fn) / idcg;
}

double mrr(const RankedList& list, int relevant_threshold) {
    if (relevant_threshold < 1) {
        throw ValidationError("mrr: threshold must be >= 1");
    }
    for (std::size_t i = 0; i < list.docs.size(); ++i) {
        if (list.docs[i].gain >= relevant_threshold) {
            return 1.0 / static_cast<double>(i + 1);
        }
    }
    return 0.0;
}

BootstrapCi bootstrap_ci(std::span<const double> values, int iterations, double level,
                         std::uint64_t seed) {
    if (values.empty()) {
        throw ValidationError("bootstrap_ci: empty input");
    }
    if (iterations < 1 || level <= 0.0 || level >= 1.0) {
        throw ValidationError("bootstrap_ci: bad iterations/level");
    }

    BootstrapCi ci;
    double sum = 0.0;
    for (double v : values) sum += v;
    ci.mean = sum / static_cast<double>(values.size());

    Rng rng(seed);
    std::vector<double> means(static_cast<std::size_t>(iterations));
    const std::size_t n = values.size();
    for (int it = 0; it < iterations; ++it) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += values[rng.index(n)];
        }
        means[static_cast<std::size_t>(it)] = s / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());

    // Linearly interpolated quantile over the sorted resample means.
    auto quantile = [&means](double q) {
        const double pos = q * static_cast<double>(means.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, means.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return means[lo] * (1.0 - frac) + means[hi] * frac;
    };
    ci.ci_low = quantile((1.0 - level) / 2.0);
    ci.ci_high = quantile((1.0 + level) / 2.0);
    return ci;
}

const BootstrapCi& RankEvalReport::metric(const std::string& name) const {
    for (const auto& [key, value] : metrics) {
        if (key == name) return value;
    }
    throw ValidationError("unknown metric '" + name + "'");
}

RankEvalReport evaluate_run(const std::vector<RankedList>& lists, const std::vector<int>& ks,
                            int relevant_threshold, int iterations, double level,
                            std::uint64_t seed, GainFunction gain_fn) {
    if (lists.empty()) {
        throw ValidationError("evaluate_run: no ranked lists");
    }

    RankEvalReport report;
    report.query_count = static_cast<int>(lists.size());

    // Per-query values: NDCG only where defined, MRR everywhere (0 counts).
    std::map<int, std::vector<double>> ndcg_values;
    std::vector<double> mrr_values;
    for (const RankedList& list : lists) {
        bool skipped = false;
        for (int k : ks) {
            const auto v = ndcg_at_k(list, k, gain_fn);
            if (v) {
                ndcg_values[k].push_back(*v);
            } else {
                skipped = true;
            }
        }
        if (skipped) ++report.skipped_queries;
        mrr_values.push_back(mrr(list, relevant_threshold));
    }

    for (int k : ks) {
        const auto& values = ndcg_values[k];
        if (values.empty()) {
            throw ValidationError("evaluate_run: every query skipped for ndcg@" +
                                  std::to_string(k));
        }
        const std::string name = "ndcg@" + std::to_string(k);
        report.metrics.emplace_back(
            name, bootstrap_ci(values, iterations, level, mix_seed(seed, name)));
    }
    report.metrics.emplace_back(
        "mrr", bootstrap_ci(mrr_values, iterations, level, mix_seed(seed, "mrr")));
    return report;
}

std::vector<RankedList> load_ranked_lists(const std::filesystem::path& path) {
    struct Entry {
        int rank;
        RankedDoc doc;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<Entry>> by_query;

    for_each_jsonl_record(path, [&](std::size_t line_no, const json& record) {
        auto fail = [&](const std::string& msg) {
            throw ValidationError(path.filename().string() + ":" + std::to_string(line_no) +
                                  ": " + msg);
        };
        if (!record.contains("query_id") || !record.contains("doc_id") ||
            !record.contains("rank") || !record.contains("gain")) {
            fail("record needs query_id, doc_id, rank, gain");
        }
        const std::string query_id = record.at("query_id").get<std::string>();
        const int rank = record.at("rank").get<int>();
        const int gain = record.at("gain").get<int>();
        if (rank < 1) fail("rank must be >= 1");
        if (gain < 0) fail("gain must be >= 0");
        if (by_query.find(query_id) == by_query.end()) {
            order.push_back(query_id);
        }
        by_query[query_id].push_back(
            Entry{rank, RankedDoc{record.at("doc_id").get<std::string>(), gain}});
    });
    if (order.empty()) {
        throw ValidationError(path.filename().string() + ": empty ranked-list file");
    }

    std::vector<RankedList> lists;
    lists.reserve(order.size());
    for (const std::string& query_id : order) {
        auto& entries = by_query[query_id];
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.rank < b.rank; });
        RankedList list;
        list.query_id = query_id;
        int last_rank = 0;
        for (Entry& e : entries) {
            if (e.rank == last_rank) {
                throw ValidationError("duplicate rank " + std::to_string(e.rank) +
                                      " for query '" + query_id + "'");
            }
            last_rank = e.rank;
            list.docs.push_back(std::move(e.doc));
        }
        lists.push_back(std::move(list));
    }
    return lists;
}

void save_ranked_lists(const std::vector<RankedList>& lists,
                       const std::filesystem::path& path) {
    JsonlWriter out(path);
    for (const RankedList& list : lists) {
        for (std::size_t i = 0; i < list.docs.size(); ++i) {
            out.write(json{{"query_id", list.query_id},
                           {"doc_id", list.docs[i].doc_id},
                           {"rank", static_cast<int>(i + 1)},
                           {"gain", list.docs[i].gain}});
        }
    }
}

}  // namespace relkit
