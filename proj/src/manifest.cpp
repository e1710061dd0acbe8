#include "relkit/manifest.hpp"

#include <fstream>

namespace relkit {

json RunManifest::to_json() const {
    return json{
        {"command", command},        {"config", config_snapshot}, {"inputs", inputs},
        {"outputs", outputs},        {"seeds", seeds},            {"tool_version", tool_version},
        {"started_at", started_at},  {"finished_at", finished_at},
    };
}

void RunManifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write manifest " + path.string());
    }
    out << to_json().dump(2) << '\n';
}

}  // namespace relkit
