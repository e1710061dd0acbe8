#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relkit/agreement.hpp"
#include "relkit/jsonl.hpp"
#include "relkit/judge.hpp"
#include "relkit/rank_eval.hpp"
#include "relkit/rescale.hpp"
#include "relkit/sim.hpp"

namespace relkit {

// Aligned plain-text table from rows of cells; the first row is the header.
std::string format_table(const std::vector<std::vector<std::string>>& rows);

// ---- agreement (doc-score / doc-order columns) -----------------------------

std::string agreement_table(const std::vector<std::pair<std::string, AgreementReport>>& runs);
json agreement_to_json(const AgreementReport& report);
// One row per (run, grade): per-class precision/recall/F1 plus accuracy, for
// external plotting.
std::string per_class_csv(const std::vector<std::pair<std::string, AgreementReport>>& runs);

// ---- rescaling -------------------------------------------------------------

std::string rescale_table(const RescaleReport& report);
json rescale_to_json(const RescaleReport& report);

// ---- ranking metrics -------------------------------------------------------

std::string rank_eval_table(const RankEvalReport& report);
json rank_eval_to_json(const RankEvalReport& report);

// ---- throughput ------------------------------------------------------------

std::string throughput_table(const std::vector<ThroughputReport>& reports);
json throughput_to_json(const std::vector<ThroughputReport>& reports);

// ---- simulator comparison ----------------------------------------------------

std::string comparison_table(const ComparisonReport& report);

}  // namespace relkit
