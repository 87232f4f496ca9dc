#include "smoothreg/manifest.hpp"

#include <chrono>
#include <ctime>

#include <json.hpp>

#include "smoothreg/csv.hpp"

namespace smoothreg {

std::string iso8601_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::json j;
  j["config_digest"] = manifest.config_digest;
  j["base_seed"] = manifest.base_seed;
  j["artifact_version"] = manifest.artifact_version;
  j["started_at"] = manifest.started_at;
  j["finished_at"] = manifest.finished_at;
  j["outputs"] = manifest.outputs;
  atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace smoothreg
