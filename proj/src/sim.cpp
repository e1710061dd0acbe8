#include "relkit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "relkit/rng.hpp"

namespace relkit {

namespace {

// Target cosine to the query latent per generator. Margin docs sit between
// the soft-negative cloud (~0) and the weakest positive.
constexpr double kCosPos1 = 0.65;
constexpr double kCosPos2 = 0.75;
constexpr double kCosPos3 = 0.85;
constexpr double kCosMargin = 0.45;

std::vector<double> random_unit(Rng& rng, int dim) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (double& x : v) {
            x = rng.normal();
            norm2 += x * x;
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
}

// Unit vector with expected cosine `c` toward `axis`.
std::vector<double> rotated_toward(Rng& rng, const std::vector<double>& axis, double c) {
    std::vector<double> v = random_unit(rng, static_cast<int>(axis.size()));
    const double mix = std::sqrt(1.0 - c * c);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = c * axis[j] + mix * v[j];
        norm2 += v[j] * v[j];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
}

double positive_cos(int level) {
    switch (level) {
        case 0: return kCosPos1;
        case 1: return kCosPos2;
        default: return kCosPos3;
    }
}

std::string padded_id(const char* prefix, int i) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%s%05d", prefix, i);
    return buf;
}

SimDataset make_split(const SimConfig& config, const char* id_prefix, int n_queries,
                      std::uint64_t split_seed) {
    Rng latent_rng(mix_seed(split_seed, "latent"));
    Rng doc_rng(mix_seed(split_seed, "docs"));
    Rng plant_rng(mix_seed(split_seed, "plant"));

    const TierCounts& counts = config.docs_per_query;
    SimDataset data;
    data.queries.reserve(static_cast<std::size_t>(n_queries));
    for (int qi = 0; qi < n_queries; ++qi) {
        SimQuery query;
        query.query_id = padded_id(id_prefix, qi);
        query.latent = random_unit(latent_rng, config.embedding_dim);

        int doc_no = 0;
        auto add_doc = [&](RankingTier tier, std::optional<RescaleBucket> planted,
                           std::vector<double> features) {
            SimDoc doc;
            doc.doc_id = padded_id("d", doc_no++);
            doc.tier = tier;
            doc.planted = planted;
            doc.features = std::move(features);
            query.docs.push_back(std::move(doc));
        };

        for (int i = 0; i < counts.soft_neg; ++i) {
            add_doc(RankingTier::SoftNeg, std::nullopt,
                    random_unit(doc_rng, config.embedding_dim));
        }
        for (int i = 0; i < counts.hard_neg; ++i) {
            const double u = plant_rng.uniform01();
            if (u < config.fhn_rate) {
                // Secretly positive: drawn from one of the positive generators.
                const int level = static_cast<int>(doc_rng.index(3));
                add_doc(RankingTier::HardNeg, RescaleBucket::FHN,
                        rotated_toward(doc_rng, query.latent, positive_cos(level)));
            } else if (u < config.fhn_rate + config.hn_true_rate) {
                add_doc(RankingTier::HardNeg, RescaleBucket::HN,
                        rotated_toward(doc_rng, query.latent, kCosMargin));
            } else {
                add_doc(RankingTier::HardNeg, RescaleBucket::SLN,
                        random_unit(doc_rng, config.embedding_dim));
            }
        }
        for (int i = 0; i < counts.pos1; ++i) {
            add_doc(RankingTier::Pos1, std::nullopt,
                    rotated_toward(doc_rng, query.latent, kCosPos1));
        }
        for (int i = 0; i < counts.pos2; ++i) {
            add_doc(RankingTier::Pos2, std::nullopt,
                    rotated_toward(doc_rng, query.latent, kCosPos2));
        }
        for (int i = 0; i < counts.pos3; ++i) {
            add_doc(RankingTier::Pos3, std::nullopt,
                    rotated_toward(doc_rng, query.latent, kCosPos3));
        }
        data.queries.push_back(std::move(query));
    }
    return data;
}

}  // namespace

ConfusionRows identity_confusion() {
    ConfusionRows rows{};
    for (int i = 0; i < 4; ++i) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    return rows;
}

const ConfusionRows& judge_preset_confusion(JudgeMode mode) {
    // Shaped so the rescaled-bucket distributions land near the reference
    // shares: ~85/5/10 for the fine-tuned judges, ~85/8/7 for the un-tuned
    // ones with most of their "true hard negative" flags wrong.
    static const ConfusionRows kFtLike = {{
        {0.96, 0.02, 0.015, 0.005},
        {0.25, 0.60, 0.12, 0.03},
        {0.10, 0.10, 0.60, 0.20},
        {0.05, 0.05, 0.30, 0.60},
    }};
    static const ConfusionRows kVanillaLike = {{
        {0.92, 0.062, 0.013, 0.005},
        {0.55, 0.10, 0.25, 0.10},
        {0.36, 0.26, 0.31, 0.07},
        {0.18, 0.18, 0.32, 0.32},
    }};
    static const ConfusionRows kIdentity = identity_confusion();
    switch (mode) {
        case JudgeMode::FtLike: return kFtLike;
        case JudgeMode::VanillaLike: return kVanillaLike;
        default: return kIdentity;
    }
}

void SimConfig::validate() const {
    if (n_train_queries < 1 || n_val_queries < 1) {
        throw ValidationError("query counts must be >= 1");
    }
    if (embedding_dim < 1) {
        throw ValidationError("embedding_dim must be >= 1");
    }
    if (docs_per_query.soft_neg < 0 || docs_per_query.hard_neg < 0 ||
        docs_per_query.pos1 < 0 || docs_per_query.pos2 < 0 || docs_per_query.pos3 < 0) {
        throw ValidationError("docs_per_query counts must be >= 0");
    }
    if (docs_per_query.pos1 + docs_per_query.pos2 + docs_per_query.pos3 < 1) {
        throw ValidationError("need at least one positive per query");
    }
    if (fhn_rate < 0.0 || hn_true_rate < 0.0 || fhn_rate + hn_true_rate > 1.0) {
        throw ValidationError("fhn_rate + hn_true_rate must lie in [0,1]");
    }
    if (oracle_fhn_grade4_rate < 0.0 || oracle_fhn_grade4_rate > 1.0) {
        throw ValidationError("oracle_fhn_grade4_rate must lie in [0,1]");
    }
    if (eval_dims.empty()) {
        throw ValidationError("eval_dims must not be empty");
    }
    for (int d : eval_dims) {
        if (d < 1 || d > embedding_dim) {
            throw ValidationError("eval_dims entries must lie in [1, embedding_dim]");
        }
    }
    for (const auto& row : judge_confusion) {
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0) throw ValidationError("judge_confusion entries must be >= 0");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ValidationError("judge_confusion rows must sum to 1");
        }
    }
    if (training.epochs < 0 || training.learning_rate <= 0.0) {
        throw ValidationError("bad training config");
    }
    if (bootstrap_iterations < 1 || ci_level <= 0.0 || ci_level >= 1.0) {
        throw ValidationError("bad bootstrap config");
    }
}

SynthData generate_synthetic(const SimConfig& config) {
    config.validate();
    SynthData data;
    data.train = make_split(config, "q", config.n_train_queries,
                            mix_seed(config.training.seed, "train"));
    data.val =
        make_split(config, "v", config.n_val_queries, mix_seed(config.training.seed, "val"));
    return data;
}

PlantedCounts planted_counts(const SimDataset& dataset) {
    PlantedCounts counts;
    for (const SimQuery& query : dataset.queries) {
        for (const SimDoc& doc : query.docs) {
            if (!doc.planted) continue;
            switch (*doc.planted) {
                case RescaleBucket::SLN: ++counts.sln; break;
                case RescaleBucket::HN: ++counts.hn; break;
                case RescaleBucket::FHN: ++counts.fhn; break;
            }
        }
    }
    return counts;
}

RankingDataset to_ranking_dataset(const SimDataset& dataset) {
    RankingDataset out;
    out.split = DatasetSplit::Train;
    out.groups.reserve(dataset.queries.size());
    for (const SimQuery& query : dataset.queries) {
        RankingGroup group;
        group.query_id = query.query_id;
        group.examples.reserve(query.docs.size());
        for (const SimDoc& doc : query.docs) {
            RankingExample example;
            example.query_id = query.query_id;
            example.document_id = doc.doc_id;
            example.tier = doc.tier;
            group.examples.push_back(std::move(example));
        }
        out.groups.push_back(std::move(group));
    }
    return out;
}

JudgmentMap simulate_judgments(const SimDataset& dataset, const SimulatedJudge& judge,
                               std::uint64_t seed, const SimConfig& config) {
    // Separate streams so Confused with an identity matrix reproduces the
    // Oracle map bit-for-bit.
    Rng fhn4_rng(mix_seed(seed, "fhn4"));
    Rng confusion_rng(mix_seed(seed, "confusion"));
    const ConfusionRows& rows = judge.mode == JudgeMode::Confused
                                    ? config.judge_confusion
                                    : judge_preset_confusion(judge.mode);

    JudgmentMap map;
    for (const SimQuery& query : dataset.queries) {
        for (const SimDoc& doc : query.docs) {
            if (doc.tier != RankingTier::HardNeg || !doc.planted) continue;
            int true_grade = 0;
            switch (*doc.planted) {
                case RescaleBucket::SLN: true_grade = 1; break;
                case RescaleBucket::HN: true_grade = 2; break;
                case RescaleBucket::FHN:
                    true_grade =
                        fhn4_rng.uniform01() < config.oracle_fhn_grade4_rate ? 4 : 3;
                    break;
            }
            const auto& row = rows[static_cast<std::size_t>(true_grade - 1)];
            const double u = confusion_rng.uniform01();
            double cum = 0.0;
            int emitted = 4;
            for (int g = 0; g < 4; ++g) {
                cum += row[static_cast<std::size_t>(g)];
                if (u < cum) {
                    emitted = g + 1;
                    break;
                }
            }
            Judgment judgment;
            judgment.grade = RelevanceGrade::checked(emitted);
            map[{query.query_id, doc.doc_id}] = judgment;
        }
    }
    return map;
}

double LinearScorer::score(const std::vector<double>& latent,
                           const std::vector<double>& features, int prefix_dim) const {
    const int d = dim;
    const int k = std::min(prefix_dim, d);
    double s = 0.0;
    for (int j = 0; j < k; ++j) {
        double yj = 0.0;
        const double* row = weights.data() + static_cast<std::size_t>(j) * d;
        for (int l = 0; l < d; ++l) {
            yj += row[l] * features[static_cast<std::size_t>(l)];
        }
        s += latent[static_cast<std::size_t>(j)] * yj;
    }
    return s;
}

LossGrad sim_loss_and_grad(const SimDataset& data,
                           const std::vector<std::vector<int>>& gains,
                           const std::vector<double>& weights, int dim,
                           const std::vector<int>& eval_dims) {
    const int d = dim;
    std::vector<int> dims = eval_dims;
    std::sort(dims.begin(), dims.end());

    LossGrad out;
    out.grad.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);

    std::vector<double> y;       // W x per doc, d entries
    std::vector<double> scores;  // per (doc, dim)
    std::vector<double> coef;    // p - t per (doc, dim)

    std::size_t counted_queries = 0;
    for (std::size_t qi = 0; qi < data.queries.size(); ++qi) {
        const SimQuery& query = data.queries[qi];
        const std::size_t n = query.docs.size();
        if (n == 0) continue;
        const std::vector<int>& g = gains[qi];
        double total_gain = 0.0;
        for (std::size_t i = 0; i < n; ++i) total_gain += static_cast<double>(g[i]);
        if (total_gain <= 0.0) continue;
        ++counted_queries;

        y.assign(n * static_cast<std::size_t>(d), 0.0);
        scores.assign(n * dims.size(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double>& x = query.docs[i].features;
            double* yi = y.data() + i * static_cast<std::size_t>(d);
            for (int j = 0; j < d; ++j) {
                double acc = 0.0;
                const double* row = weights.data() + static_cast<std::size_t>(j) * d;
                for (int l = 0; l < d; ++l) acc += row[l] * x[static_cast<std::size_t>(l)];
                yi[j] = acc;
            }
            // Prefix inner products recorded at every eval dim.
            double partial = 0.0;
            std::size_t next_dim = 0;
            for (int j = 0; j < d && next_dim < dims.size(); ++j) {
                partial += query.latent[static_cast<std::size_t>(j)] * yi[j];
                while (next_dim < dims.size() && dims[next_dim] == j + 1) {
                    scores[i * dims.size() + next_dim] = partial;
                    ++next_dim;
                }
            }
        }

        coef.assign(n * dims.size(), 0.0);
        for (std::size_t k = 0; k < dims.size(); ++k) {
            double max_score = -1e300;
            for (std::size_t i = 0; i < n; ++i) {
                max_score = std::max(max_score, scores[i * dims.size() + k]);
            }
            double z = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                z += std::exp(scores[i * dims.size() + k] - max_score);
            }
            const double log_z = std::log(z) + max_score;
            for (std::size_t i = 0; i < n; ++i) {
                const double s = scores[i * dims.size() + k];
                const double t = static_cast<double>(g[i]) / total_gain;
                const double p = std::exp(s - log_z);
                out.loss += -t * (s - log_z);
                coef[i * dims.size() + k] = p - t;
            }
        }

        // grad row j accumulates (latent_j * suffix_coef(j)) * x; suffix_coef
        // sums the coefficients of every eval dim that still covers row j.
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double>& x = query.docs[i].features;
            double suffix = 0.0;
            std::vector<double> suffix_at(dims.size() + 1, 0.0);
            for (std::size_t k = dims.size(); k-- > 0;) {
                suffix += coef[i * dims.size() + k];
                suffix_at[k] = suffix;
            }
            std::size_t region = 0;  // smallest eval dim still above row j
            for (int j = 0; j < d; ++j) {
                while (region < dims.size() && dims[region] <= j) ++region;
                if (region >= dims.size()) break;
                const double cj = query.latent[static_cast<std::size_t>(j)] * suffix_at[region];
                if (cj == 0.0) continue;
                double* grow = out.grad.data() + static_cast<std::size_t>(j) * d;
                for (int l = 0; l < d; ++l) {
                    grow[l] += cj * x[static_cast<std::size_t>(l)];
                }
            }
        }
    }

    if (counted_queries > 0) {
        const double inv = 1.0 / static_cast<double>(counted_queries);
        out.loss *= inv;
        for (double& v : out.grad) v *= inv;
    }
    return out;
}

TrainResult train_scorer(const SimDataset& train,
                         const std::vector<std::vector<int>>& gains, const SimConfig& config) {
    if (gains.size() != train.queries.size()) {
        throw ValidationError("train_scorer: gains table does not match dataset");
    }
    const int d = config.embedding_dim;
    TrainResult result;
    result.scorer.dim = d;
    result.scorer.weights.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d),
                                 0.0);
    result.epoch_losses.reserve(static_cast<std::size_t>(config.training.epochs));

    for (int epoch = 0; epoch < config.training.epochs; ++epoch) {
        LossGrad lg = sim_loss_and_grad(train, gains, result.scorer.weights, d,
                                        config.eval_dims);
        if (!std::isfinite(lg.loss)) {
            throw Error("training diverged at epoch " + std::to_string(epoch));
        }
        result.epoch_losses.push_back(lg.loss);
        const double lr = config.training.learning_rate;
        for (std::size_t i = 0; i < lg.grad.size(); ++i) {
            result.scorer.weights[i] -= lr * lg.grad[i];
        }
    }
    return result;
}

std::vector<std::vector<int>> original_tier_gains(const SimDataset& dataset) {
    std::vector<std::vector<int>> gains;
    gains.reserve(dataset.queries.size());
    for (const SimQuery& query : dataset.queries) {
        std::vector<int> g;
        g.reserve(query.docs.size());
        for (const SimDoc& doc : query.docs) {
            g.push_back(tier_ladder_gain(doc.tier));
        }
        gains.push_back(std::move(g));
    }
    return gains;
}

std::vector<std::vector<int>> rescaled_gains(const RankingDataset& rescaled) {
    std::vector<std::vector<int>> gains;
    gains.reserve(rescaled.groups.size());
    for (const RankingGroup& group : rescaled.groups) {
        std::vector<int> g;
        g.reserve(group.examples.size());
        for (const RankingExample& example : group.examples) {
            g.push_back(rescaled_gain(example));
        }
        gains.push_back(std::move(g));
    }
    return gains;
}

std::vector<RankedList> rank_validation(const SimDataset& val, const LinearScorer& scorer,
                                        int prefix_dim) {
    std::vector<RankedList> lists;
    lists.reserve(val.queries.size());
    for (const SimQuery& query : val.queries) {
        struct Scored {
            double score;
            const SimDoc* doc;
        };
        std::vector<Scored> scored;
        scored.reserve(query.docs.size());
        for (const SimDoc& doc : query.docs) {
            scored.push_back(Scored{scorer.score(query.latent, doc.features, prefix_dim), &doc});
        }
        std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.doc->doc_id < b.doc->doc_id;
        });
        RankedList list;
        list.query_id = query.query_id;
        list.docs.reserve(scored.size());
        for (const Scored& s : scored) {
            list.docs.push_back(RankedDoc{s.doc->doc_id, tier_ladder_gain(s.doc->tier)});
        }
        lists.push_back(std::move(list));
    }
    return lists;
}

const RankEvalReport& ConditionResult::at_dim(int dim) const {
    for (const auto& [d, report] : by_dim) {
        if (d == dim) return report;
    }
    throw ValidationError("no report at dim " + std::to_string(dim));
}

const ConditionResult& ComparisonReport::condition(const std::string& name) const {
    for (const ConditionResult& c : conditions) {
        if (c.name == name) return c;
    }
    throw ValidationError("no condition named '" + name + "'");
}

ComparisonReport run_comparison(const SimConfig& config) {
    config.validate();
    const SynthData data = generate_synthetic(config);
    const RankingDataset train_view = to_ranking_dataset(data.train);

    struct ConditionSpec {
        std::string name;
        std::optional<JudgeMode> judge;
    };
    const std::vector<ConditionSpec> specs = {
        {"none", std::nullopt},
        {"oracle", JudgeMode::Oracle},
        {"ft_like", JudgeMode::FtLike},
        {"vanilla_like", JudgeMode::VanillaLike},
    };

    ComparisonReport report;
    report.config = config;
    report.conditions.resize(specs.size());

    // Conditions are independent and individually deterministic, so they can
    // run in parallel without changing any result.
    auto run_condition = [&](std::size_t idx) {
        const ConditionSpec& spec = specs[idx];
        ConditionResult result;
        result.name = spec.name;

        std::vector<std::vector<int>> gains;
        if (spec.judge) {
            const SimulatedJudge judge{*spec.judge};
            const JudgmentMap judgments = simulate_judgments(
                data.train, judge, mix_seed(config.training.seed, "judge." + spec.name),
                config);
            auto [rescaled, rescale_report] = rescale_dataset(train_view, judgments);
            result.rescale = rescale_report;
            gains = rescaled_gains(rescaled);
        } else {
            gains = original_tier_gains(data.train);
        }

        TrainResult trained = train_scorer(data.train, gains, config);
        result.epoch_losses = std::move(trained.epoch_losses);

        for (int dim : config.eval_dims) {
            const std::vector<RankedList> lists =
                rank_validation(data.val, trained.scorer, dim);
            RankEvalReport eval = evaluate_run(
                lists, {5, 10, 30}, config.mrr_threshold, config.bootstrap_iterations,
                config.ci_level,
                mix_seed(config.training.seed,
                         "bootstrap." + spec.name + "." + std::to_string(dim)));
            result.by_dim.emplace_back(dim, std::move(eval));
        }
        report.conditions[idx] = std::move(result);
    };

    std::vector<std::thread> threads;
    threads.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        threads.emplace_back(run_condition, i);
    }
    for (std::thread& t : threads) t.join();
    return report;
}

json sim_config_to_json(const SimConfig& config) {
    json confusion = json::array();
    for (const auto& row : config.judge_confusion) {
        confusion.push_back(json(row));
    }
    return json{
        {"n_train_queries", config.n_train_queries},
        {"n_val_queries", config.n_val_queries},
        {"docs_per_query",
         {{"soft_neg", config.docs_per_query.soft_neg},
          {"hard_neg", config.docs_per_query.hard_neg},
          {"pos1", config.docs_per_query.pos1},
          {"pos2", config.docs_per_query.pos2},
          {"pos3", config.docs_per_query.pos3}}},
        {"embedding_dim", config.embedding_dim},
        {"eval_dims", config.eval_dims},
        {"fhn_rate", config.fhn_rate},
        {"hn_true_rate", config.hn_true_rate},
        {"oracle_fhn_grade4_rate", config.oracle_fhn_grade4_rate},
        {"judge_confusion", confusion},
        {"training",
         {{"epochs", config.training.epochs},
          {"learning_rate", config.training.learning_rate},
          {"seed", config.training.seed}}},
        {"bootstrap_iterations", config.bootstrap_iterations},
        {"ci_level", config.ci_level},
        {"mrr_threshold", config.mrr_threshold},
    };
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig config;
    config.n_train_queries = j.value("n_train_queries", config.n_train_queries);
    config.n_val_queries = j.value("n_val_queries", config.n_val_queries);
    if (j.contains("docs_per_query")) {
        const json& d = j.at("docs_per_query");
        config.docs_per_query.soft_neg = d.value("soft_neg", config.docs_per_query.soft_neg);
        config.docs_per_query.hard_neg = d.value("hard_neg", config.docs_per_query.hard_neg);
        config.docs_per_query.pos1 = d.value("pos1", config.docs_per_query.pos1);
        config.docs_per_query.pos2 = d.value("pos2", config.docs_per_query.pos2);
        config.docs_per_query.pos3 = d.value("pos3", config.docs_per_query.pos3);
    }
    config.embedding_dim = j.value("embedding_dim", config.embedding_dim);
    if (j.contains("eval_dims")) {
        config.eval_dims = j.at("eval_dims").get<std::vector<int>>();
    }
    config.fhn_rate = j.value("fhn_rate", config.fhn_rate);
    config.hn_true_rate = j.value("hn_true_rate", config.hn_true_rate);
    config.oracle_fhn_grade4_rate =
        j.value("oracle_fhn_grade4_rate", config.oracle_fhn_grade4_rate);
    if (j.contains("judge_confusion")) {
        const json& rows = j.at("judge_confusion");
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 4; ++c) {
                config.judge_confusion[r][c] = rows.at(r).at(c).get<double>();
            }
        }
    }
    if (j.contains("training")) {
        const json& t = j.at("training");
        config.training.epochs = t.value("epochs", config.training.epochs);
        config.training.learning_rate = t.value("learning_rate", config.training.learning_rate);
        config.training.seed = t.value("seed", config.training.seed);
    }
    config.bootstrap_iterations = j.value("bootstrap_iterations", config.bootstrap_iterations);
    config.ci_level = j.value("ci_level", config.ci_level);
    config.mrr_threshold = j.value("mrr_threshold", config.mrr_threshold);
    config.validate();
    return config;
}

json comparison_to_json(const ComparisonReport& report) {
    json conditions = json::array();
    for (const ConditionResult& c : report.conditions) {
        json by_dim = json::array();
        for (const auto& [dim, eval] : c.by_dim) {
            json metrics = json::object();
            for (const auto& [name, ci] : eval.metrics) {
                metrics[name] = {{"mean", ci.mean}, {"ci_low", ci.ci_low},
                                 {"ci_high", ci.ci_high}};
            }
            by_dim.push_back(json{{"dim", dim},
                                  {"metrics", metrics},
                                  {"query_count", eval.query_count},
                                  {"skipped_queries", eval.skipped_queries}});
        }
        json entry = {{"name", c.name}, {"by_dim", by_dim}};
        if (c.rescale) {
            entry["rescale"] = {{"total_hard_negatives", c.rescale->total_hard_negatives},
                                {"judged", c.rescale->judged},
                                {"error_count", c.rescale->error_count},
                                {"pct_sln", c.rescale->pct_sln},
                                {"pct_hn", c.rescale->pct_hn},
                                {"pct_fhn", c.rescale->pct_fhn}};
        }
        if (!c.epoch_losses.empty()) {
            entry["first_loss"] = c.epoch_losses.front();
            entry["last_loss"] = c.epoch_losses.back();
        }
        conditions.push_back(std::move(entry));
    }
    return json{{"config", sim_config_to_json(report.config)}, {"conditions", conditions}};
}

}  // namespace relkit
