#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/io.hpp"
#include "nlslab/modulation_fit.hpp"

namespace nlslab {

struct Check {
  std::string name;
  double value = 0.0;
  std::string bound;  // human-readable threshold
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  double seconds = 0.0;
  double budget = 0.0;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, CsvTable>> tables;
  std::string error;  // set when the run threw

  bool pass() const;
  json to_json() const;
  // Tables are not stored in the report and come back empty.
  static CriterionResult from_json(const json& j);
};

struct AcceptanceOptions {
  std::filesystem::path out_dir = "acceptance_out";
  bool write_files = true;
  TrackConfig track;  // criterion 8
  double track_shoot_s0 = 20.0;
  std::size_t track_n = 512;
  // Criterion 9 compares against tables already on disk when present.
  bool reuse_tables = true;
};

constexpr int kCriterionCount = 9;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
std::string summary_line(const CriterionResult& r);

}  // namespace nlslab
