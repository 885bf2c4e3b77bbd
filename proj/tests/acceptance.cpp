#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "nlslab/acceptance.hpp"
#include "nlslab/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance battery"};
  std::vector<int> ids;
  std::string out_dir = "acceptance_out";
  bool report = false;
  app.add_option("-c,--criterion", ids, "criteria to run (default: all)")->check(CLI::Range(1, nlslab::kCriterionCount));
  app.add_option("--out-dir", out_dir, "directory for tables and reports");
  app.add_flag("--report", report, "summarize reports already in the output directory");
  CLI11_PARSE(app, argc, argv);
  if (ids.empty())
    for (int id = 1; id <= nlslab::kCriterionCount; ++id) ids.push_back(id);

  if (report) {
    bool all = true;
    for (int id : ids) {
      const auto path = std::filesystem::path(out_dir) / ("c" + std::to_string(id) + ".json");
      if (!std::filesystem::exists(path)) {
        std::cout << "MISSING  criterion " << id << "  (no report at " << path.string() << ")" << std::endl;
        all = false;
        continue;
      }
      const auto r = nlslab::CriterionResult::from_json(nlslab::read_json(path));
      std::cout << nlslab::summary_line(r) << std::endl;
      all = all && r.pass();
    }
    return all ? 0 : 1;
  }

  nlslab::AcceptanceOptions opt;
  opt.out_dir = out_dir;
  bool all = true;
  for (int id : ids) {
    const nlslab::CriterionResult r = nlslab::run_criterion(id, opt);
    std::cout << nlslab::summary_line(r) << std::endl;
    all = all && r.pass();
  }
  return all ? 0 : 1;
}
