#include "relkit/dataset.hpp"

#include <set>
#include <utility>

#include "relkit/jsonl.hpp"

namespace relkit {

namespace {

std::string location(const std::filesystem::path& path, std::size_t line_no) {
    return path.filename().string() + ":" + std::to_string(line_no);
}

std::string require_string(const json& record, const char* field,
                           const std::filesystem::path& path, std::size_t line_no) {
    auto it = record.find(field);
    if (it == record.end() || !it->is_string()) {
        throw ValidationError(location(path, line_no) + ": missing or non-string field '" +
                              field + "'");
    }
    return it->get<std::string>();
}

}  // namespace

const Document& EvalDataset::document(const std::string& id) const {
    auto it = documents.find(id);
    if (it == documents.end()) {
        throw ValidationError("unknown document id '" + id + "'");
    }
    return it->second;
}

EvalDataset load_eval_dataset(const std::filesystem::path& path) {
    EvalDataset dataset;
    std::unordered_map<std::string, std::size_t> group_index;  // query_id -> slot
    std::set<std::pair<std::string, std::string>> seen_pairs;

    for_each_jsonl_record(path, [&](std::size_t line_no, const json& record) {
        const std::string query_id = require_string(record, "query_id", path, line_no);
        const std::string query_text = require_string(record, "query_text", path, line_no);
        if (query_text.empty()) {
            throw ValidationError(location(path, line_no) + ": empty query_text");
        }
        const std::string doc_id = require_string(record, "doc_id", path, line_no);
        if (doc_id.empty()) {
            throw ValidationError(location(path, line_no) + ": empty doc_id");
        }

        if (!seen_pairs.emplace(query_id, doc_id).second) {
            throw ValidationError(location(path, line_no) + ": duplicate pair (" + query_id +
                                  ", " + doc_id + ")");
        }

        Document doc;
        doc.id = doc_id;
        doc.url = record.value("url", std::string());
        doc.title = record.value("title", std::string());
        doc.content = record.value("content", std::string());
        if (record.contains("meta_description")) {
            doc.meta_description = record.at("meta_description").get<std::string>();
        }

        auto [doc_it, inserted] = dataset.documents.emplace(doc_id, doc);
        if (!inserted && !(doc_it->second == doc)) {
            throw ValidationError(location(path, line_no) + ": document '" + doc_id +
                                  "' redefined with different fields");
        }

        JudgedPair pair;
        pair.query_id = query_id;
        pair.document_id = doc_id;
        if (record.contains("gold")) {
            if (!record.at("gold").is_number_integer()) {
                throw ValidationError(location(path, line_no) + ": gold must be an integer");
            }
            const int g = record.at("gold").get<int>();
            if (g < RelevanceGrade::kMin || g > RelevanceGrade::kMax) {
                throw ValidationError(location(path, line_no) + ": gold grade " +
                                      std::to_string(g) + " outside scale [1,4]");
            }
            pair.gold = RelevanceGrade::checked(g);
        }

        auto slot = group_index.find(query_id);
        if (slot == group_index.end()) {
            QueryGroup group;
            group.query.id = query_id;
            group.query.text = query_text;
            if (record.contains("intent")) {
                const json& intent = record.at("intent");
                IntentDistribution dist;
                dist.navigational = intent.value("nav", 0.0);
                dist.informational = intent.value("info", 0.0);
                dist.transactional = intent.value("trans", 0.0);
                try {
                    dist.validate();
                } catch (const ValidationError& e) {
                    throw ValidationError(location(path, line_no) + ": " + e.what());
                }
                group.query.intent = dist;
            }
            group_index.emplace(query_id, dataset.groups.size());
            dataset.groups.push_back(std::move(group));
            slot = group_index.find(query_id);
        }
        dataset.groups[slot->second].pairs.push_back(std::move(pair));
    });

    return dataset;
}

void save_eval_dataset(const EvalDataset& dataset, const std::filesystem::path& path) {
    JsonlWriter out(path);
    for (const QueryGroup& group : dataset.groups) {
        for (const JudgedPair& pair : group.pairs) {
            const Document& doc = dataset.document(pair.document_id);
            json record = {
                {"query_id", group.query.id},
                {"query_text", group.query.text},
                {"doc_id", doc.id},
                {"url", doc.url},
                {"title", doc.title},
                {"content", doc.content},
            };
            if (group.query.intent) {
                record["intent"] = {{"nav", group.query.intent->navigational},
                                    {"info", group.query.intent->informational},
                                    {"trans", group.query.intent->transactional}};
            }
            if (doc.meta_description) {
                record["meta_description"] = *doc.meta_description;
            }
            if (pair.gold) {
                record["gold"] = pair.gold->value();
            }
            out.write(record);
        }
    }
}

DatasetStats validate_dataset(const std::vector<QueryGroup>& groups) {
    if (groups.empty()) {
        throw ValidationError("empty dataset");
    }
    DatasetStats stats;
    stats.query_count = static_cast<std::int64_t>(groups.size());
    for (int g = RelevanceGrade::kMin; g <= RelevanceGrade::kMax; ++g) {
        stats.per_class_counts[g] = 0;
    }
    for (const QueryGroup& group : groups) {
        for (const JudgedPair& pair : group.pairs) {
            if (!pair.gold) {
                throw ValidationError("pair (" + pair.query_id + ", " + pair.document_id +
                                      ") has no gold grade");
            }
            ++stats.per_class_counts[pair.gold->value()];
            ++stats.pair_count;
        }
    }
    if (stats.pair_count == 0) {
        throw ValidationError("empty dataset");
    }
    stats.avg_docs_per_query =
        static_cast<double>(stats.pair_count) / static_cast<double>(stats.query_count);
    return stats;
}

std::size_t RankingDataset::example_count() const {
    std::size_t n = 0;
    for (const RankingGroup& g : groups) n += g.examples.size();
    return n;
}

double RankingDataset::hard_negative_fraction() const {
    std::size_t total = 0;
    std::size_t hard = 0;
    for (const RankingGroup& g : groups) {
        for (const RankingExample& e : g.examples) {
            ++total;
            if (e.tier == RankingTier::HardNeg) ++hard;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(hard) / static_cast<double>(total);
}

RankingDataset load_ranking_dataset(const std::filesystem::path& path) {
    RankingDataset dataset;
    std::unordered_map<std::string, std::size_t> group_index;
    std::set<std::pair<std::string, std::string>> seen_pairs;
    bool saw_record = false;

    for_each_jsonl_record(path, [&](std::size_t line_no, const json& record) {
        if (record.contains("split")) {
            if (saw_record || !dataset.groups.empty()) {
                throw ValidationError(location(path, line_no) +
                                      ": split header must be the first record");
            }
            const std::string split = record.at("split").get<std::string>();
            if (split == "validation") {
                dataset.split = DatasetSplit::Validation;
            } else if (split == "train") {
                dataset.split = DatasetSplit::Train;
            } else {
                throw ValidationError(location(path, line_no) + ": unknown split '" + split +
                                      "'");
            }
            return;
        }
        saw_record = true;

        RankingExample example;
        example.query_id = require_string(record, "query_id", path, line_no);
        example.document_id = require_string(record, "doc_id", path, line_no);
        example.title = record.value("title", std::string());
        example.content = record.value("content", std::string());
        try {
            example.tier = tier_from_string(require_string(record, "tier", path, line_no));
            if (record.contains("rescaled_bucket")) {
                example.rescaled =
                    bucket_from_string(record.at("rescaled_bucket").get<std::string>());
            }
        } catch (const ValidationError& e) {
            throw ValidationError(location(path, line_no) + ": " + e.what());
        }
        if (example.rescaled && example.tier != RankingTier::HardNeg) {
            throw ValidationError(location(path, line_no) +
                                  ": rescaled_bucket on a non-hard-negative example");
        }
        if (!seen_pairs.emplace(example.query_id, example.document_id).second) {
            throw ValidationError(location(path, line_no) + ": duplicate pair (" +
                                  example.query_id + ", " + example.document_id + ")");
        }

        auto slot = group_index.find(example.query_id);
        if (slot == group_index.end()) {
            group_index.emplace(example.query_id, dataset.groups.size());
            dataset.groups.push_back(RankingGroup{example.query_id, {}});
            slot = group_index.find(example.query_id);
        }
        dataset.groups[slot->second].examples.push_back(std::move(example));
    });

    if (!saw_record) {
        throw ValidationError(path.filename().string() + ": empty dataset");
    }
    return dataset;
}

void save_ranking_dataset(const RankingDataset& dataset, const std::filesystem::path& path) {
    JsonlWriter out(path);
    out.write(json{
        {"split", dataset.split == DatasetSplit::Validation ? "validation" : "train"}});
    for (const RankingGroup& group : dataset.groups) {
        for (const RankingExample& e : group.examples) {
            json record = {
                {"query_id", e.query_id}, {"doc_id", e.document_id}, {"title", e.title},
                {"content", e.content},   {"tier", to_string(e.tier)},
            };
            if (e.rescaled) {
                record["rescaled_bucket"] = to_string(*e.rescaled);
            }
            out.write(record);
        }
    }
}

}  // namespace relkit
