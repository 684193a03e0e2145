#include "skillmeta/manifest.hpp"

#include <json.hpp>

#include "skillmeta/csv.hpp"

namespace skillmeta {

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["config"] = config;
    j["seed"] = seed;
    j["duration_seconds"] = duration_seconds;
    j["created_utc"] = created_utc;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::string& primary_output) {
    write_text_atomic(primary_output + ".manifest.json", manifest.to_json());
}

}  // namespace skillmeta
