#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nlslab/field.hpp"

namespace nlslab {

using json = nlohmann::json;

// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

struct Provenance {
  std::string config_hash;
  std::string version = NLSLAB_VERSION;
  json to_json() const;
};

// Round-trip formatting: 17 significant digits.
std::string format_double(double v);

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  void add_row(std::vector<double> row);
  const std::vector<double>& row(std::size_t i) const { return rows_[i]; }
  // Throws missing-column.
  std::vector<double> column(const std::string& name) const;
  bool has_column(const std::string& name) const;

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;
  static CsvTable read(const std::filesystem::path& path);
  static CsvTable parse(const std::string& text);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

// Little-endian interleaved (re, im) doubles, row-major, with a JSON
// sidecar <path>.json holding n, L, centre and provenance.
void write_field(const std::filesystem::path& path, const ComplexField2D& f, const Provenance& prov,
                 const json& extra = json::object());
ComplexField2D read_field(const std::filesystem::path& path);

// Appends {file: provenance} to manifest.json in the file's directory.
void stamp_manifest(const std::filesystem::path& file, const Provenance& prov);

}  // namespace nlslab
