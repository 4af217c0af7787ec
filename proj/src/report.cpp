#include "hermet/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hermet {

void RunConfig::validate(bool needs_seed) const {
  if (rank < 1 || dim < 1) throw std::invalid_argument("config: rank/dim must be >= 1");
  if (grid_points < 8 || grid_points % 2 != 0)
    throw std::invalid_argument("config: grid must be even and >= 8");
  if (!(radius > 0.0)) throw std::invalid_argument("config: radius must be positive");
  if (halo < 2) throw std::invalid_argument("config: halo must be >= 2");
  if (nu_steps < 1) throw std::invalid_argument("config: nu-steps must be >= 1");
  if (tol < 0.0) throw std::invalid_argument("config: tolerances must be positive");
  if (!(floor_det > 0.0)) throw std::invalid_argument("config: floor must be positive");
  if (format != "json" && format != "csv")
    throw std::invalid_argument("config: format must be json or csv");
  if (needs_seed && !seed_set)
    throw std::invalid_argument("config: seed is mandatory for randomized commands");
  for (std::size_t i = 1; i < annuli.size(); ++i)
    if (!(annuli[i] > annuli[i - 1]))
      throw std::invalid_argument("config: annuli must be ascending");
}

Json RunConfig::to_json() const {
  Json j;
  j["metric"] = metric;
  j["rank"] = rank;
  j["dim"] = dim;
  j["params"] = params;
  if (!profile.empty()) j["profile"] = profile;
  j["grid_points"] = grid_points;
  j["radius"] = radius;
  j["halo"] = halo;
  j["nu_start"] = nu_start;
  j["nu_steps"] = nu_steps;
  j["delta"] = delta;
  j["p"] = p_exponent;
  j["tol"] = tol;
  j["annuli"] = annuli;
  j["floor"] = floor_det;
  j["seed"] = seed;
  j["format"] = format;
  return j;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("atomic rename failed for " + path);
}

void write_json_report(const std::string& path, const Json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw std::invalid_argument("CsvTable: row width mismatch");
  rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) s += ",";
    s += header[i];
  }
  s += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ",";
      s += row[i];
    }
    s += "\n";
  }
  return s;
}

std::string csv_sibling(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ".csv";
  return path.substr(0, dot) + ".csv";
}

}  // namespace hermet
