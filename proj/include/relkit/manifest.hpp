#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "relkit/jsonl.hpp"

namespace relkit {

constexpr const char* kToolVersion = "0.1.0";

// Reproducibility envelope: every CLI run writes exactly one manifest
// alongside its outputs. Replaying the recorded command with the recorded
// config snapshot reproduces the outputs byte-for-byte (given a deterministic
// backend).
struct RunManifest {
    std::string command;
    json config_snapshot;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::uint64_t> seeds;
    std::string tool_version = kToolVersion;
    std::string started_at;
    std::string finished_at;

    json to_json() const;
    void write(const std::filesystem::path& path) const;
};

}  // namespace relkit
