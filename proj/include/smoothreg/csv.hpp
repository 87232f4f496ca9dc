#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "smoothreg/experiments.hpp"

namespace smoothreg {

// Doubles are emitted with 17 significant digits so a write/read round
// trip is exact to within 1e-12 (in fact bit-exact).
std::string format_double(double v);

// Writes content to path via a temporary file plus rename, so readers
// never observe a half-written file.
void atomic_write_file(const std::string& path, const std::string& content);

struct SiteTable {
  std::vector<std::string> ids;
  Eigen::MatrixXd locations;  // n x 2
};

// Locations CSV: header `site_id,x,y`, one row per site.
SiteTable read_locations_csv(const std::string& path);
void write_locations_csv(const std::string& path, const SiteTable& sites);

// Long-format data CSV: header `site_id,x,y,replicate_id,variable,value`.
// Every (site, replicate, variable) combination must appear exactly once;
// site coordinates must be consistent across rows.  Replicate and variable
// columns of the matrices are ordered by sorted id.
struct LongTable {
  SiteTable sites;
  std::vector<std::string> replicate_ids;
  std::vector<std::string> variables;
  std::vector<Eigen::MatrixXd> values;  // one n x R matrix per variable

  const Eigen::MatrixXd& variable(const std::string& name) const;
};

LongTable read_long_csv(const std::string& path);
void write_long_csv(const std::string& path, const LongTable& table);

// Result-table CSV: header `n,key,mean_beta,band_lo,band_hi,rmse,failures`;
// rmse is empty for cells without one.
void write_experiment_csv(const std::string& path, const ExperimentTable& table);
ExperimentTable read_experiment_csv(const std::string& path);

}  // namespace smoothreg
