#include "nlslab/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nlslab/error.hpp"

namespace nlslab {

namespace fs = std::filesystem;

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json Provenance::to_json() const { return {{"config_hash", config_hash}, {"version", version}}; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  require(!columns_.empty(), "a table needs at least one column");
}

void CsvTable::add_row(std::vector<double> row) {
  require(row.size() == columns_.size(), "row width does not match the header");
  rows_.push_back(std::move(row));
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& c : columns_)
    if (c == name) return true;
  return false;
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns_.size(); ++k)
    if (columns_[k] == name) {
      std::vector<double> out;
      out.reserve(rows_.size());
      for (const auto& r : rows_) out.push_back(r[k]);
      return out;
    }
  fail(ErrorKind::missing_column, "no column '" + name + "'");
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    if (k) out += ',';
    out += columns_[k];
  }
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k) out += ',';
      out += format_double(r[k]);
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const fs::path& path) const {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::io_error, "cannot open " + path.string());
  os << to_string();
  if (!os) fail(ErrorKind::io_error, "write failed for " + path.string());
}

CsvTable CsvTable::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  CsvTable t;
  bool header = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header) {
      t.columns_ = cells;
      header = false;
      continue;
    }
    if (cells.size() != t.columns_.size()) fail(ErrorKind::io_error, "ragged CSV row: " + line);
    std::vector<double> row;
    for (const auto& c : cells) {
      // strtod flags subnormals with ERANGE, so only the end pointer is checked.
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) fail(ErrorKind::io_error, "non-numeric CSV cell '" + c + "'");
      row.push_back(v);
    }
    t.rows_.push_back(std::move(row));
  }
  return t;
}

CsvTable CsvTable::read(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::io_error, "cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) fail(ErrorKind::io_error, "cannot open " + path.string());
  os << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::io_error, "cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    fail(ErrorKind::io_error, path.string() + ": " + e.what());
  }
}

namespace {

void put_le(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return std::bit_cast<double>(bits);
}

fs::path sidecar(const fs::path& p) { return fs::path(p.string() + ".json"); }

}  // namespace

void write_field(const fs::path& path, const ComplexField2D& f, const Provenance& prov, const json& extra) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::io_error, "cannot open " + path.string());
  for (const cplx& v : f.data()) {
    put_le(os, v.real());
    put_le(os, v.imag());
  }
  if (!os) fail(ErrorKind::io_error, "write failed for " + path.string());
  const Grid2D& g = f.grid();
  json meta = {{"n", g.n}, {"L", g.half_width}, {"cx", g.cx}, {"cy", g.cy}, {"provenance", prov.to_json()}};
  if (!extra.empty()) meta["p"] = extra;
  write_json(sidecar(path), meta);
}

ComplexField2D read_field(const fs::path& path) {
  const json meta = read_json(sidecar(path));
  const Grid2D g(meta.at("n").get<std::size_t>(), meta.at("L").get<double>(), meta.value("cx", 0.0),
                 meta.value("cy", 0.0));
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::io_error, "cannot open " + path.string());
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (raw.size() != g.size() * 16) fail(ErrorKind::io_error, "field file size does not match its sidecar");
  std::vector<cplx> data(g.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = {get_le(&raw[16 * i]), get_le(&raw[16 * i + 8])};
  return ComplexField2D(g, std::move(data));
}

void stamp_manifest(const fs::path& file, const Provenance& prov) {
  const fs::path dir = file.has_parent_path() ? file.parent_path() : fs::path(".");
  const fs::path man = dir / "manifest.json";
  json j = fs::exists(man) ? read_json(man) : json::object();
  j[file.filename().string()] = prov.to_json();
  write_json(man, j);
}

}  // namespace nlslab
