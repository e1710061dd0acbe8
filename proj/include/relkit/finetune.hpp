#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "relkit/dataset.hpp"
#include "relkit/prompting.hpp"

namespace relkit {

struct ExportSummary {
    std::array<int, 4> train_per_class{};  // index 0 -> grade 1
    std::array<int, 4> val_per_class{};
    std::vector<std::pair<std::string, std::string>> train_keys;  // (query_id, doc_id)
    std::vector<std::pair<std::string, std::string>> val_keys;
};

// Splits `size` across the four grades; the remainder goes to the lowest
// grades first (250 -> 63,63,62,62).
std::array<int, 4> balanced_allocation(int size);

// Writes class-balanced train/validation chat corpora. Each record is
// {system, user, assistant} with the rendered grading prompt and the gold
// completion "Score: g"; a first-line header records the allocation. Sampling
// is seed-deterministic and the splits are disjoint.
ExportSummary export_finetune_corpus(const EvalDataset& dataset, int train_size, int val_size,
                                     std::uint64_t seed, const PromptConfig& config,
                                     const std::filesystem::path& train_path,
                                     const std::filesystem::path& val_path);

}  // namespace relkit
