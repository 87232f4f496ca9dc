#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace smoothreg {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Provenance record written next to every experiment's result files.
struct RunManifest {
  std::string config_digest;
  std::uint64_t base_seed = 0;
  std::string artifact_version = kArtifactVersion;
  std::string started_at;   // ISO 8601 UTC
  std::string finished_at;  // ISO 8601 UTC
  std::vector<std::string> outputs;
};

std::string iso8601_utc_now();

// JSON serialization; written atomically.
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace smoothreg
