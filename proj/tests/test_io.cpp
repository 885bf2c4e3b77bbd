#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nlslab/config.hpp"
#include "nlslab/error.hpp"
#include "nlslab/io.hpp"
#include "nlslab/plot.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "nlslab_test_io";
  fs::create_directories(d);
  return d;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST_CASE("config parsing") {
  const Config c = Config::parse("# comment\ngrid.n = 256\n\ngrid.L=20.5  # box\nname = soliton\n");
  CHECK(c.get_int("grid.n", 0) == 256);
  CHECK(c.get_double("grid.L", 0.0) == 20.5);
  CHECK(c.get_string("name", "") == "soliton");
  CHECK(c.get_double("missing", 3.0) == 3.0);
  CHECK(c.unused().empty());

  const Config d = Config::parse("name = soliton\ngrid.L = 20.5\ngrid.n = 256\n");
  CHECK(c.hash() == d.hash());
  CHECK(c.canonical() == d.canonical());

  const Config e = Config::parse("a = 1\nb = 2\n");
  e.get_int("a", 0);
  CHECK(e.unused() == std::vector<std::string>{"b"});

  CHECK(kind_of([] { Config::parse("novalue\n"); }) == ErrorKind::config_error);
  CHECK(kind_of([] { Config::parse("a = 1\na = 2\n"); }) == ErrorKind::config_error);
  CHECK(kind_of([] { Config::parse(" = 1\n"); }) == ErrorKind::config_error);
  CHECK(kind_of([] { Config::parse("a = 1.5\n").get_int("a", 0); }) == ErrorKind::config_error);
  CHECK(kind_of([] { Config::parse("a = x\n").get_double("a", 0); }) == ErrorKind::config_error);
  CHECK(kind_of([] { Config::load("/nonexistent/path.cfg"); }) == ErrorKind::config_error);
}

TEST_CASE("csv round trip") {
  CsvTable t({"s", "value"});
  t.add_row({1.0, 0.1});
  t.add_row({2.0, 1.0 / 3.0});
  t.add_row({1e300, -5e-324});
  const CsvTable r = CsvTable::parse("# header comment\n" + t.to_string());
  REQUIRE(r.rows() == 3);
  CHECK(r.column("value")[1] == 1.0 / 3.0);
  CHECK(r.column("s")[2] == 1e300);
  CHECK(r.column("value")[2] == -5e-324);
  CHECK(r.to_string() == t.to_string());
  CHECK(kind_of([&] { r.column("nope"); }) == ErrorKind::missing_column);
  CHECK(kind_of([&] { t.add_row({1.0}); }) == ErrorKind::invalid_argument);

  const fs::path p = scratch_dir() / "t.csv";
  t.write(p);
  CHECK(CsvTable::read(p).to_string() == t.to_string());
  CHECK(kind_of([] { CsvTable::read("/nonexistent/file.csv"); }) == ErrorKind::io_error);
}

TEST_CASE("field files and provenance") {
  const Grid2D g(16, 3.0, 0.5, -0.25);
  const ComplexField2D f = ComplexField2D::sample(g, [](double x, double y) { return cplx(x * y, x - y); });
  Provenance prov;
  prov.config_hash = fnv1a_hex("a=1");
  const fs::path p = scratch_dir() / "f.bin";
  write_field(p, f, prov, {{"note", "test"}});
  const ComplexField2D r = read_field(p);
  CHECK(r.grid().n == 16);
  CHECK(r.grid().half_width == 3.0);
  CHECK(r.grid().cx == 0.5);
  CHECK(r.grid().cy == -0.25);
  bool same = true;
  for (std::size_t i = 0; i < f.data().size(); ++i) same = same && f.data()[i] == r.data()[i];
  CHECK(same);
  CHECK(fs::file_size(p) == 16 * 16 * 2 * sizeof(double));
  const json side = read_json(p.string() + ".json");
  CHECK(side["provenance"]["config_hash"] == prov.config_hash);
  CHECK(side["p"]["note"] == "test");

  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");

  stamp_manifest(p, prov);
  const json m = read_json(scratch_dir() / "manifest.json");
  CHECK(m.contains("f.bin"));
}

TEST_CASE("svg plots") {
  CsvTable t({"s", "b_s_log_s", "ratio"});
  for (int i = 1; i <= 20; ++i) t.add_row({std::pow(10.0, 1.0 + 0.25 * i), 1.0 - 0.5 / i, 1.0 + 1.0 / i});
  PlotSpec spec;
  spec.x = "s";
  spec.y = {"b_s_log_s", "ratio"};
  spec.log_x = true;
  const std::string svg = plot_svg(t, spec);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  CHECK(kind_of([&] { plot_svg(CsvTable{}, spec); }) == ErrorKind::missing_column);
  CHECK(kind_of([&] { plot_svg(CsvTable({"s", "b_s_log_s", "ratio"}), spec); }) == ErrorKind::missing_column);
  PlotSpec bad = spec;
  bad.y = {"absent"};
  CHECK(kind_of([&] { plot_svg(t, bad); }) == ErrorKind::missing_column);
}
