#include "smoothreg/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
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

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s, const std::string& path, int line_no) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    throw DataError(path + ":" + std::to_string(line_no) + ": not a number: '" + s + "'");
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void expect_header(const std::vector<std::string>& lines, const std::string& expected,
                   const std::string& path) {
  if (lines.empty()) throw DataError(path + ": empty file");
  std::string got;
  for (const auto& f : split_csv_line(lines.front())) {
    if (!got.empty()) got += ',';
    got += f;
  }
  if (got != expected)
    throw DataError(path + ":1: expected header '" + expected + "', got '" + got + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(tmp + ": cannot open for writing");
    out << content;
    if (!out.flush()) throw DataError(tmp + ": write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw DataError(path + ": rename failed: " + std::strerror(errno));
  }
}

SiteTable read_locations_csv(const std::string& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "site_id,x,y", path);
  SiteTable out;
  std::vector<std::pair<double, double>> coords;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split_csv_line(lines[i]);
    const int line_no = static_cast<int>(i) + 1;
    if (fields.size() != 3)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 fields, got " +
                      std::to_string(fields.size()));
    if (fields[0].empty())
      throw DataError(path + ":" + std::to_string(line_no) + ": empty site_id");
    out.ids.push_back(fields[0]);
    coords.emplace_back(parse_double(fields[1], path, line_no),
                        parse_double(fields[2], path, line_no));
  }
  if (out.ids.empty()) throw DataError(path + ": no data rows");
  out.locations.resize(static_cast<Eigen::Index>(coords.size()), 2);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    out.locations(static_cast<Eigen::Index>(i), 0) = coords[i].first;
    out.locations(static_cast<Eigen::Index>(i), 1) = coords[i].second;
  }
  return out;
}

void write_locations_csv(const std::string& path, const SiteTable& sites) {
  std::string content = "site_id,x,y\n";
  for (std::size_t i = 0; i < sites.ids.size(); ++i) {
    content += sites.ids[i];
    content += ',';
    content += format_double(sites.locations(static_cast<Eigen::Index>(i), 0));
    content += ',';
    content += format_double(sites.locations(static_cast<Eigen::Index>(i), 1));
    content += '\n';
  }
  atomic_write_file(path, content);
}

const Eigen::MatrixXd& LongTable::variable(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == name) return values[i];
  throw DataError("long table: no variable '" + name + "'");
}

LongTable read_long_csv(const std::string& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "site_id,x,y,replicate_id,variable,value", path);

  struct Row {
    std::string site, rep, var;
    double x, y, value;
  };
  std::vector<Row> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split_csv_line(lines[i]);
    const int line_no = static_cast<int>(i) + 1;
    if (fields.size() != 6)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 6 fields, got " +
                      std::to_string(fields.size()));
    if (fields[0].empty() || fields[3].empty() || fields[4].empty())
      throw DataError(path + ":" + std::to_string(line_no) + ": empty id field");
    rows.push_back({fields[0], fields[3], fields[4], parse_double(fields[1], path, line_no),
                    parse_double(fields[2], path, line_no),
                    parse_double(fields[5], path, line_no)});
  }
  if (rows.empty()) throw DataError(path + ": no data rows");

  LongTable out;
  std::map<std::string, int> site_index;
  for (const auto& r : rows) {
    auto [it, inserted] = site_index.try_emplace(r.site, static_cast<int>(site_index.size()));
    if (inserted) {
      out.sites.ids.push_back(r.site);
    }
    (void)it;
  }
  std::map<std::string, int> rep_index, var_index;
  for (const auto& r : rows) rep_index.try_emplace(r.rep, 0);
  for (const auto& r : rows) var_index.try_emplace(r.var, 0);
  {
    int i = 0;
    for (auto& [k, v] : rep_index) {
      v = i++;
      out.replicate_ids.push_back(k);
    }
    i = 0;
    for (auto& [k, v] : var_index) {
      v = i++;
      out.variables.push_back(k);
    }
  }

  const Eigen::Index n = static_cast<Eigen::Index>(out.sites.ids.size());
  const Eigen::Index n_rep = static_cast<Eigen::Index>(out.replicate_ids.size());
  out.sites.locations.resize(n, 2);
  std::vector<bool> coord_set(static_cast<std::size_t>(n), false);
  out.values.assign(out.variables.size(), Eigen::MatrixXd::Constant(n, n_rep, 0.0));
  std::vector<std::vector<bool>> seen(
      out.variables.size(), std::vector<bool>(static_cast<std::size_t>(n * n_rep), false));

  for (const auto& r : rows) {
    const int si = site_index.at(r.site);
    const int ri = rep_index.at(r.rep);
    const int vi = var_index.at(r.var);
    if (coord_set[static_cast<std::size_t>(si)]) {
      if (out.sites.locations(si, 0) != r.x || out.sites.locations(si, 1) != r.y)
        throw DataError(path + ": site '" + r.site + "' has inconsistent coordinates");
    } else {
      out.sites.locations(si, 0) = r.x;
      out.sites.locations(si, 1) = r.y;
      coord_set[static_cast<std::size_t>(si)] = true;
    }
    const std::size_t flat = static_cast<std::size_t>(si) * static_cast<std::size_t>(n_rep) +
                             static_cast<std::size_t>(ri);
    if (seen[static_cast<std::size_t>(vi)][flat])
      throw DataError(path + ": duplicate entry for (" + r.site + ", " + r.rep + ", " + r.var +
                      ")");
    seen[static_cast<std::size_t>(vi)][flat] = true;
    out.values[static_cast<std::size_t>(vi)](si, ri) = r.value;
  }
  for (std::size_t vi = 0; vi < seen.size(); ++vi)
    for (std::size_t f = 0; f < seen[vi].size(); ++f)
      if (!seen[vi][f])
        throw DataError(path + ": variable '" + out.variables[vi] +
                        "' is missing entries (need every site x replicate)");
  return out;
}

void write_long_csv(const std::string& path, const LongTable& table) {
  std::string content = "site_id,x,y,replicate_id,variable,value\n";
  const Eigen::Index n = static_cast<Eigen::Index>(table.sites.ids.size());
  for (std::size_t vi = 0; vi < table.variables.size(); ++vi)
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(table.replicate_ids.size()); ++r)
      for (Eigen::Index i = 0; i < n; ++i) {
        content += table.sites.ids[static_cast<std::size_t>(i)];
        content += ',';
        content += format_double(table.sites.locations(i, 0));
        content += ',';
        content += format_double(table.sites.locations(i, 1));
        content += ',';
        content += table.replicate_ids[static_cast<std::size_t>(r)];
        content += ',';
        content += table.variables[vi];
        content += ',';
        content += format_double(table.values[vi](i, r));
        content += '\n';
      }
  atomic_write_file(path, content);
}

void write_experiment_csv(const std::string& path, const ExperimentTable& table) {
  std::string content = "n,key,mean_beta,band_lo,band_hi,rmse,failures\n";
  for (const auto& c : table.cells) {
    content += std::to_string(c.n);
    content += ',';
    content += c.key;
    content += ',';
    content += format_double(c.mean_beta);
    content += ',';
    content += format_double(c.band_lo);
    content += ',';
    content += format_double(c.band_hi);
    content += ',';
    if (c.rmse) content += format_double(*c.rmse);
    content += ',';
    content += std::to_string(c.failures);
    content += '\n';
  }
  atomic_write_file(path, content);
}

ExperimentTable read_experiment_csv(const std::string& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "n,key,mean_beta,band_lo,band_hi,rmse,failures", path);
  ExperimentTable out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split_csv_line(lines[i]);
    const int line_no = static_cast<int>(i) + 1;
    if (fields.size() != 7)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 7 fields, got " +
                      std::to_string(fields.size()));
    ExperimentCell cell;
    cell.n = static_cast<int>(parse_double(fields[0], path, line_no));
    cell.key = fields[1];
    cell.mean_beta = parse_double(fields[2], path, line_no);
    cell.band_lo = parse_double(fields[3], path, line_no);
    cell.band_hi = parse_double(fields[4], path, line_no);
    if (!fields[5].empty()) cell.rmse = parse_double(fields[5], path, line_no);
    cell.failures = static_cast<int>(parse_double(fields[6], path, line_no));
    out.cells.push_back(std::move(cell));
  }
  return out;
}

}  // namespace smoothreg
