#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace skillmeta {

inline constexpr const char* kToolVersion = "0.1.0";

/// Reproducibility record written alongside a run's file outputs.
struct RunManifest {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::map<std::string, std::string> config;
    std::uint64_t seed = 0;
    double duration_seconds = 0;
    std::string created_utc;

    std::string to_json() const;
};

/// Writes `<output>.manifest.json` next to the named output file.
void write_manifest(const RunManifest& manifest, const std::string& primary_output);

}  // namespace skillmeta
