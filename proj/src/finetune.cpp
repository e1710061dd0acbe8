#include "relkit/finetune.hpp"

#include "relkit/jsonl.hpp"
#include "relkit/rng.hpp"

namespace relkit {

std::array<int, 4> balanced_allocation(int size) {
    if (size < 0) {
        throw ValidationError("split size must be >= 0");
    }
    std::array<int, 4> alloc{};
    alloc.fill(size / 4);
    for (int g = 0; g < size % 4; ++g) {
        ++alloc[static_cast<std::size_t>(g)];
    }
    return alloc;
}

namespace {

struct PoolEntry {
    const Query* query;
    const Document* doc;
    RelevanceGrade gold;
    std::pair<std::string, std::string> key() const { return {query->id, doc->id}; }
};

void write_split(const std::filesystem::path& path, const char* split_name,
                 const std::array<int, 4>& alloc, std::uint64_t seed,
                 const PromptConfig& config, const std::vector<PoolEntry>& entries) {
    JsonlWriter out(path);
    json per_class = json::object();
    for (int g = 0; g < 4; ++g) {
        per_class[std::to_string(g + 1)] = alloc[static_cast<std::size_t>(g)];
    }
    out.write(json{{"header",
                    {{"split", split_name},
                     {"per_class", per_class},
                     {"seed", seed},
                     {"prompt_config", config.tag()}}}});
    for (const PoolEntry& entry : entries) {
        const RenderedPrompt prompt = render_prompt(*entry.query, *entry.doc, config);
        out.write(json{{"system", prompt.system_text},
                       {"user", prompt.user_text},
                       {"assistant", "Score: " + std::to_string(entry.gold.value())}});
    }
}

}  // namespace

ExportSummary export_finetune_corpus(const EvalDataset& dataset, int train_size, int val_size,
                                     std::uint64_t seed, const PromptConfig& config,
                                     const std::filesystem::path& train_path,
                                     const std::filesystem::path& val_path) {
    config.validate();
    if (config.few_shot != 0) {
        throw ValidationError("fine-tuning prompts are rendered zero-shot");
    }
    const std::array<int, 4> train_alloc = balanced_allocation(train_size);
    const std::array<int, 4> val_alloc = balanced_allocation(val_size);

    std::array<std::vector<PoolEntry>, 4> pools;
    for (const QueryGroup& group : dataset.groups) {
        for (const JudgedPair& pair : group.pairs) {
            if (!pair.gold) continue;
            pools[static_cast<std::size_t>(pair.gold->value() - 1)].push_back(
                PoolEntry{&group.query, &dataset.document(pair.document_id), *pair.gold});
        }
    }
    for (int g = 0; g < 4; ++g) {
        const auto gi = static_cast<std::size_t>(g);
        const int needed = train_alloc[gi] + val_alloc[gi];
        if (static_cast<int>(pools[gi].size()) < needed) {
            throw ValidationError("grade " + std::to_string(g + 1) + " has only " +
                                  std::to_string(pools[gi].size()) + " pairs, need " +
                                  std::to_string(needed) + " for balanced splits");
        }
    }

    // Per-grade shuffle; the first train_alloc entries feed the train split,
    // the next val_alloc the validation split, so the splits stay disjoint for
    // every seed.
    ExportSummary summary;
    std::array<std::vector<PoolEntry>, 4> train_by_grade;
    std::array<std::vector<PoolEntry>, 4> val_by_grade;
    for (int g = 0; g < 4; ++g) {
        const auto gi = static_cast<std::size_t>(g);
        Rng rng(mix_seed(seed, "grade" + std::to_string(g + 1)));
        rng.shuffle(pools[gi]);
        for (int i = 0; i < train_alloc[gi]; ++i) {
            train_by_grade[gi].push_back(pools[gi][static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < val_alloc[gi]; ++i) {
            val_by_grade[gi].push_back(
                pools[gi][static_cast<std::size_t>(train_alloc[gi] + i)]);
        }
        summary.train_per_class[gi] = train_alloc[gi];
        summary.val_per_class[gi] = val_alloc[gi];
    }

    // Round-robin across grades so any training-time batching stays balanced.
    auto interleave = [](const std::array<std::vector<PoolEntry>, 4>& by_grade) {
        std::vector<PoolEntry> out;
        std::size_t cycle = 0;
        bool any = true;
        while (any) {
            any = false;
            for (const auto& grade_entries : by_grade) {
                if (cycle < grade_entries.size()) {
                    out.push_back(grade_entries[cycle]);
                    any = true;
                }
            }
            ++cycle;
        }
        return out;
    };
    const std::vector<PoolEntry> train_entries = interleave(train_by_grade);
    const std::vector<PoolEntry> val_entries = interleave(val_by_grade);
    for (const PoolEntry& e : train_entries) summary.train_keys.push_back(e.key());
    for (const PoolEntry& e : val_entries) summary.val_keys.push_back(e.key());

    write_split(train_path, "train", train_alloc, seed, config, train_entries);
    write_split(val_path, "validation", val_alloc, seed, config, val_entries);
    return summary;
}

}  // namespace relkit
