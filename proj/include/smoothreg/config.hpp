#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smoothreg/experiments.hpp"

namespace smoothreg {

// Flat key/value configuration in INI-style syntax: `key = value` lines,
// optional `[section]` headers that prefix the keys ("section.key"), and
// `#` / `;` comments.  Keys are unique; values are kept as trimmed strings.
class ConfigMap {
 public:
  static ConfigMap parse_file(const std::string& path);
  static ConfigMap parse_string(const std::string& text, const std::string& name = "<config>");

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // comma-separated lists
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

  // FNV-1a 64 over the canonical "key=value" lines in sorted key order, so
  // the digest ignores comments, whitespace and key ordering.
  std::string digest() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::string context(const std::string& key) const;

  std::string name_;
  std::map<std::string, std::string> kv_;
};

// Translates a config into an ExperimentConfig for the given kind; unknown
// keys raise ConfigError so typos do not silently fall back to defaults.
ExperimentConfig experiment_config_from(const ConfigMap& config, ExperimentKind kind,
                                        std::uint64_t default_seed);

}  // namespace smoothreg
