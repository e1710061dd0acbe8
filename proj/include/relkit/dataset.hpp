#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "relkit/types.hpp"

namespace relkit {

// An evaluation dataset: judged SERPs plus the document table the pairs
// reference. Immutable after load; safe to share across threads.
struct EvalDataset {
    std::vector<QueryGroup> groups;                        // file order, one per query
    std::unordered_map<std::string, Document> documents;   // doc_id -> document

    const Document& document(const std::string& id) const;
};

// Line-delimited records with fields:
//   query_id, query_text, intent{nav,info,trans}?, doc_id, url, title,
//   content, meta_description?, gold (1-4, optional for unlabeled data)
// Groups are keyed by query; within-group document order follows the file.
EvalDataset load_eval_dataset(const std::filesystem::path& path);

// Inverse of load_eval_dataset; load(save(load(f))) is structurally identical
// to load(f).
void save_eval_dataset(const EvalDataset& dataset, const std::filesystem::path& path);

// Per-class counts and percentages. Requires a fully labeled, non-empty
// dataset.
DatasetStats validate_dataset(const std::vector<QueryGroup>& groups);

enum class DatasetSplit { Train, Validation };

struct RankingGroup {
    std::string query_id;
    std::vector<RankingExample> examples;  // file order
};

struct RankingDataset {
    DatasetSplit split = DatasetSplit::Train;
    std::vector<RankingGroup> groups;

    std::size_t example_count() const;
    // Share of examples in the hard-negative tier.
    double hard_negative_fraction() const;
};

// Line-delimited records {query_id, doc_id, title, content, tier} with an
// optional first-line header {"split": "train"|"validation"} and an optional
// per-record rescaled_bucket field.
RankingDataset load_ranking_dataset(const std::filesystem::path& path);

void save_ranking_dataset(const RankingDataset& dataset, const std::filesystem::path& path);

}  // namespace relkit
