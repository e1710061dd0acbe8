#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "relkit/agreement.hpp"
#include "relkit/types.hpp"

namespace testutil {

inline relkit::RelevanceGrade g(int v) { return relkit::RelevanceGrade::checked(v); }

inline std::vector<relkit::RelevanceGrade> grades(std::initializer_list<int> values) {
    std::vector<relkit::RelevanceGrade> out;
    for (int v : values) out.push_back(g(v));
    return out;
}

inline std::vector<relkit::GradePair> grade_pairs(const std::vector<int>& gold,
                                                  const std::vector<int>& pred) {
    std::vector<relkit::GradePair> out;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        out.push_back(relkit::GradePair{g(gold[i]), g(pred[i])});
    }
    return out;
}

// One judged SERP with gold/pred grades by position.
inline relkit::QueryGroup make_group(const std::string& id, const std::vector<int>& gold,
                                     const std::vector<int>& pred) {
    relkit::QueryGroup group;
    group.query.id = id;
    group.query.text = "query " + id;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        relkit::JudgedPair pair;
        pair.query_id = id;
        pair.document_id = id + "_d" + std::to_string(i);
        pair.gold = g(gold[i]);
        if (i < pred.size()) pair.predicted = g(pred[i]);
        group.pairs.push_back(pair);
    }
    return group;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        dir_ = std::filesystem::temp_directory_path() /
               ("relkit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    const std::filesystem::path& path() const { return dir_; }
    std::filesystem::path file(const std::string& name) const { return dir_ / name; }

private:
    std::filesystem::path dir_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
