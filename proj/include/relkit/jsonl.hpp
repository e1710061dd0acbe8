#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "relkit/errors.hpp"

namespace relkit {

using json = nlohmann::json;

// Calls fn(line_number, record) for every non-blank line. Line numbers are
// 1-based; parse failures carry them.
inline void for_each_jsonl_record(const std::filesystem::path& path,
                                  const std::function<void(std::size_t, const json&)>& fn) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded()) {
            throw ValidationError(path.filename().string() + ":" + std::to_string(line_no) +
                                  ": malformed record");
        }
        fn(line_no, record);
    }
}

class JsonlWriter {
public:
    explicit JsonlWriter(const std::filesystem::path& path, bool append = false)
        : out_(path, append ? std::ios::app : std::ios::trunc) {
        if (!out_) {
            throw IoError("cannot open " + path.string() + " for writing");
        }
    }

    void write(const json& record) {
        out_ << record.dump() << '\n';
        if (!out_) {
            throw IoError("write failed");
        }
    }

    void flush() { out_.flush(); }

private:
    std::ofstream out_;
};

}  // namespace relkit
