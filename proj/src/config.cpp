#include "smoothreg/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "smoothreg/errors.hpp"

namespace smoothreg {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double_value(const std::string& value, const std::string& context) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError(context + ": cannot parse '" + value + "' as a number");
  return v;
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text, const std::string& name) {
  ConfigMap out;
  out.name_ = name;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name + ":" + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(name + ":" + std::to_string(line_no) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (!out.kv_.emplace(key, value).second)
      throw ConfigError(name + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return out;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

std::string ConfigMap::context(const std::string& key) const {
  return name_ + ": key '" + key + "'";
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return parse_double_value(it->second, context(key));
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, static_cast<double>(fallback));
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError(context(key) + ": expected an integer");
  return i;
}

std::uint64_t ConfigMap::get_uint64(const std::string& key, std::uint64_t fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError(context(key) + ": cannot parse '" + it->second + "' as an integer");
  return v;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string v = lower(it->second);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(context(key) + ": cannot parse '" + it->second + "' as a boolean");
}

std::vector<double> ConfigMap::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<double> out;
  std::istringstream in(it->second);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError(context(key) + ": empty list element");
    out.push_back(parse_double_value(item, context(key)));
  }
  if (out.empty()) throw ConfigError(context(key) + ": empty list");
  return out;
}

std::vector<int> ConfigMap::get_int_list(const std::string& key,
                                         const std::vector<int>& fallback) const {
  std::vector<double> fb;
  fb.reserve(fallback.size());
  for (int v : fallback) fb.push_back(static_cast<double>(v));
  const std::vector<double> values = get_double_list(key, fb);
  std::vector<int> out;
  out.reserve(values.size());
  for (double v : values) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw ConfigError(context(key) + ": expected integers");
    out.push_back(i);
  }
  return out;
}

std::string ConfigMap::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  for (const auto& [k, v] : kv_) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

const std::set<std::string> kCommonKeys = {
    "experiment.n_grid",
    "experiment.replications",
};

const std::set<std::string> kTimeseriesKeys = {
    "timeseries.kind",          "timeseries.domain_length",
    "timeseries.covariate_kappa", "timeseries.covariate_sigma", "timeseries.covariate_nu",
    "timeseries.noise_kappa",   "timeseries.noise_sigma",     "timeseries.noise_nu",
    "timeseries.nugget_sd",     "timeseries.span_s",          "timeseries.span_shat",
    "timeseries.lowess_iterations",
};

const std::set<std::string> kSpatialKeys = {
    "spatial.kappa",      "spatial.sigma",       "spatial.nu",         "spatial.nu_x_grid",
    "spatial.nu_sx_mode", "spatial.beta",        "spatial.site_count", "spatial.domain_side",
    "spatial.locations",
};

const std::set<std::string> kApplicationKeys = {
    "application.data",         "application.var_a",       "application.var_b",
    "application.q_a",          "application.q_b",         "application.pred_set_size",
    "application.intercept",    "application.fit_nugget",
    "standin.beta",             "standin.nu_b",            "standin.nu_sb",
    "standin.noise_sigma",      "standin.site_count",      "standin.domain_side",
    "standin.replicates",
};

void reject_unknown_keys(const ConfigMap& config, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : config.entries()) {
    (void)value;
    if (allowed.count(key) == 0 && kCommonKeys.count(key) == 0)
      throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

ExperimentConfig experiment_config_from(const ConfigMap& config, ExperimentKind kind,
                                        std::uint64_t default_seed) {
  ExperimentConfig out;
  out.kind = kind;
  out.base_seed = default_seed;

  switch (kind) {
    case ExperimentKind::Timeseries1:
    case ExperimentKind::Timeseries2:
    case ExperimentKind::Timeseries3: {
      reject_unknown_keys(config, kTimeseriesKeys);
      const int k = config.get_int("timeseries.kind", 1);
      if (k < 1 || k > 3) throw ConfigError("timeseries.kind must be 1, 2 or 3");
      out.kind = k == 1 ? ExperimentKind::Timeseries1
                        : (k == 2 ? ExperimentKind::Timeseries2 : ExperimentKind::Timeseries3);
      out.n_grid = config.get_int_list("experiment.n_grid", {128, 256, 512, 1024});
      out.replications = config.get_int("experiment.replications", 10);
      out.ts.domain_length = config.get_double("timeseries.domain_length", 10.0);
      out.ts.covariate.kappa = config.get_double("timeseries.covariate_kappa", 1.0);
      out.ts.covariate.sigma = config.get_double("timeseries.covariate_sigma", 0.4);
      out.ts.covariate.nu = config.get_double("timeseries.covariate_nu", 1.0);
      out.ts.noise.kappa = config.get_double("timeseries.noise_kappa", 1.0);
      out.ts.noise.sigma = config.get_double("timeseries.noise_sigma", 0.1);
      out.ts.noise.nu = config.get_double("timeseries.noise_nu", 1.0);
      out.ts.noise_nugget_sd = config.get_double("timeseries.nugget_sd", 0.01);
      out.ts.smoother_s.span = config.get_double("timeseries.span_s", 0.1);
      out.ts.smoother_shat.span = config.get_double("timeseries.span_shat", 0.2);
      out.ts.smoother_s.iterations = config.get_int("timeseries.lowess_iterations", 3);
      out.ts.smoother_shat.iterations = out.ts.smoother_s.iterations;
      break;
    }
    case ExperimentKind::Spatial: {
      reject_unknown_keys(config, kSpatialKeys);
      out.n_grid = config.get_int_list("experiment.n_grid", {50, 150, 300, 620});
      out.replications = config.get_int("experiment.replications", 100);
      out.sp.base.kappa = config.get_double("spatial.kappa", 0.4);
      out.sp.base.sigma = config.get_double("spatial.sigma", 1.3);
      out.sp.base.nu = config.get_double("spatial.nu", 2.0);
      out.sp.nu_x_grid =
          config.get_double_list("spatial.nu_x_grid", {0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
      const std::string mode = lower(config.get_string("spatial.nu_sx_mode", "equal"));
      if (mode == "equal")
        out.sp.nu_sx_mode = NuSxMode::EqualNu;
      else if (mode == "minus_half")
        out.sp.nu_sx_mode = NuSxMode::NuMinusHalf;
      else
        throw ConfigError("spatial.nu_sx_mode must be 'equal' or 'minus_half'");
      out.sp.beta = config.get_double("spatial.beta", 1.0);
      out.sp.site_count = config.get_int("spatial.site_count", 620);
      out.sp.domain_side = config.get_double("spatial.domain_side", 20.0);
      break;
    }
    case ExperimentKind::Application: {
      reject_unknown_keys(config, kApplicationKeys);
      out.n_grid = config.get_int_list("experiment.n_grid", {15, 50, 100, 250, 620});
      out.replications = config.get_int("experiment.replications", 1);
      out.app.name_a = config.get_string("application.var_a", "T");
      out.app.name_b = config.get_string("application.var_b", "P");
      out.app.q_a = config.get_double("application.q_a", 0.5);
      out.app.q_b = config.get_double("application.q_b", 3.0);
      out.app.pred_set_size = config.get_int("application.pred_set_size", 36);
      out.app.intercept = config.get_bool("application.intercept", true);
      out.app.fit_nugget = config.get_bool("application.fit_nugget", true);
      break;
    }
  }
  out.validate();
  return out;
}

}  // namespace smoothreg
