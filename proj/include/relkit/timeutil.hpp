#pragma once

#include <ctime>
#include <string>

namespace relkit {

// "2026-08-10T12:34:56Z"
inline std::string iso_timestamp_utc() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace relkit
