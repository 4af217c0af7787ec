// Machine-readable reports: JSON verdicts and CSV sweep tables, both carrying
// a schema-version field, written atomically. CSV floats use 17 significant
// digits so identical runs are byte-identical.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace hermet {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string metric = "identity";
  int rank = 2;
  int dim = 1;
  std::vector<double> params;
  std::string profile;

  int grid_points = 128;
  double radius = 0.9;
  int halo = 2;

  double nu_start = 0.0;  // <= 0: derive the default geometric schedule
  int nu_steps = 4;
  double delta = 0.0;
  double p_exponent = 1.0;
  double tol = 0.0;  // <= 0: method default
  std::vector<double> annuli;
  double floor_det = 1e-2;

  std::uint64_t seed = 0;
  bool seed_set = false;

  std::string out_path;
  std::string format = "json";  // json | csv

  void validate(bool needs_seed) const;
  Json to_json() const;
};

std::string format_double(double v);  // %.17g

void write_text_atomic(const std::string& path, const std::string& content);
void write_json_report(const std::string& path, const Json& j);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_string() const;
};

// Replaces the extension of `path` (or appends) to produce the CSV sibling.
std::string csv_sibling(const std::string& path);

}  // namespace hermet
