#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relkit/dataset.hpp"
#include "relkit/jsonl.hpp"
#include "relkit/rank_eval.hpp"
#include "relkit/rescale.hpp"

namespace relkit {

// Per-query document counts by tier. The default 2/14/1/1/1 mix keeps the
// ~70% hard-negative share of the production-scale datasets at desk scale.
struct TierCounts {
    int soft_neg = 2;
    int hard_neg = 14;
    int pos1 = 1;
    int pos2 = 1;
    int pos3 = 1;

    int total() const { return soft_neg + hard_neg + pos1 + pos2 + pos3; }
};

struct SimTrainingConfig {
    int epochs = 160;
    double learning_rate = 4.0;
    std::uint64_t seed = 7;
};

using ConfusionRows = std::array<std::array<double, 4>, 4>;  // row-stochastic, [true][emitted]

ConfusionRows identity_confusion();

struct SimConfig {
    int n_train_queries = 500;
    int n_val_queries = 100;
    TierCounts docs_per_query;
    int embedding_dim = 64;
    std::vector<int> eval_dims = {64, 32, 16};  // prefix dims, full dim first
    double fhn_rate = 0.10;      // hard negatives secretly drawn from the positive pool
    double hn_true_rate = 0.05;  // hard negatives genuinely at the margin
    double oracle_fhn_grade4_rate = 0.25;  // FHN share the oracle grades 4 instead of 3
    ConfusionRows judge_confusion = identity_confusion();
    SimTrainingConfig training;
    int bootstrap_iterations = 1000;
    double ci_level = 0.95;
    int mrr_threshold = 4;  // Pos1 slot: only original positives count as relevant

    void validate() const;
};

enum class JudgeMode {
    Oracle,       // reproduces the planted buckets exactly
    Confused,     // passes planted grades through config.judge_confusion
    FtLike,       // preset confusion shaped like the fine-tuned judges
    VanillaLike,  // preset confusion shaped like the un-tuned judges
};

struct SimulatedJudge {
    JudgeMode mode = JudgeMode::Oracle;
};

const ConfusionRows& judge_preset_confusion(JudgeMode mode);

struct SimDoc {
    std::string doc_id;
    RankingTier tier = RankingTier::SoftNeg;
    std::optional<RescaleBucket> planted;  // set for hard negatives only
    std::vector<double> features;          // unit vector
};

struct SimQuery {
    std::string query_id;
    std::vector<double> latent;  // unit vector
    std::vector<SimDoc> docs;
};

struct SimDataset {
    std::vector<SimQuery> queries;
};

struct SynthData {
    SimDataset train;
    SimDataset val;
};

// Per-query latent directions with positives rotated toward them (Pos3
// closest), soft negatives random, and hard negatives split between planted
// SLN (random), planted true HN (margin) and planted FHN (positive-like).
// Fully deterministic in config.training.seed.
SynthData generate_synthetic(const SimConfig& config);

struct PlantedCounts {
    std::int64_t sln = 0;
    std::int64_t hn = 0;
    std::int64_t fhn = 0;
};
PlantedCounts planted_counts(const SimDataset& dataset);

// Structural view used to run the real rescaler over simulated data.
RankingDataset to_ranking_dataset(const SimDataset& dataset);

// Grades every hard negative. Oracle emits 1/2/3 by planted bucket (4 for the
// configured FHN sub-fraction); the other modes push that grade through a
// confusion row. Deterministic per seed.
JudgmentMap simulate_judgments(const SimDataset& dataset, const SimulatedJudge& judge,
                               std::uint64_t seed, const SimConfig& config);

// score(q, x) = <q[0:prefix], (W x)[0:prefix]>
struct LinearScorer {
    int dim = 0;
    std::vector<double> weights;  // dim x dim, row-major

    double score(const std::vector<double>& latent, const std::vector<double>& features,
                 int prefix_dim) const;
};

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;  // same layout as weights
};

// Listwise softmax cross-entropy with targets proportional to gains, summed
// over every prefix dim (the Matryoshka mirror), averaged over queries.
LossGrad sim_loss_and_grad(const SimDataset& data,
                           const std::vector<std::vector<int>>& gains,
                           const std::vector<double>& weights, int dim,
                           const std::vector<int>& eval_dims);

struct TrainResult {
    LinearScorer scorer;
    std::vector<double> epoch_losses;  // loss evaluated before each update
};

// Full-batch gradient descent from a zero initialization; deterministic.
// Throws when the loss goes non-finite, reporting the epoch.
TrainResult train_scorer(const SimDataset& train,
                         const std::vector<std::vector<int>>& gains, const SimConfig& config);

// Gain tables for the training targets.
std::vector<std::vector<int>> original_tier_gains(const SimDataset& dataset);
std::vector<std::vector<int>> rescaled_gains(const RankingDataset& rescaled);

// Ranks the validation split with a trained scorer at one prefix dim;
// gains come from the original tiers (validation is never rescaled).
std::vector<RankedList> rank_validation(const SimDataset& val, const LinearScorer& scorer,
                                        int prefix_dim);

struct ConditionResult {
    std::string name;  // "none", "oracle", "ft_like", "vanilla_like"
    std::optional<RescaleReport> rescale;          // judge conditions only
    std::vector<std::pair<int, RankEvalReport>> by_dim;  // config.eval_dims order
    std::vector<double> epoch_losses;

    const RankEvalReport& at_dim(int dim) const;
};

struct ComparisonReport {
    SimConfig config;
    std::vector<ConditionResult> conditions;

    const ConditionResult& condition(const std::string& name) const;
};

// Trains one scorer per condition {none, oracle, ft_like, vanilla_like} on
// identical data and evaluates all of them on the same un-rescaled validation
// split at every prefix dim.
ComparisonReport run_comparison(const SimConfig& config);

json sim_config_to_json(const SimConfig& config);
SimConfig sim_config_from_json(const json& j);
json comparison_to_json(const ComparisonReport& report);

}  // namespace relkit
