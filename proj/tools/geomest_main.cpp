#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "geomest/harness.hpp"

using namespace geomest;

namespace {

SuiteConfig load_config(const std::string& path, const std::string& suite,
                        const std::string& constants, const std::string& out) {
  SuiteConfig cfg;
  if (!path.empty()) cfg = SuiteConfig::from_file(path);
  if (!suite.empty()) cfg.suite = suite;
  if (!constants.empty()) cfg.constants_path = constants;
  if (!out.empty()) cfg.out_path = out;
  if (!suite_known(cfg.suite)) throw std::invalid_argument("unknown suite: " + cfg.suite);
  return cfg;
}

int cmd_run(const SuiteConfig& cfg) {
  if (cfg.constants_path.empty())
    throw std::runtime_error("no constants file configured (give --constants or set constants_path)");
  ConstantsFile constants = ConstantsFile::load(cfg.constants_path);
  Report report = run_suite(cfg, constants);
  if (!cfg.out_path.empty()) write_report(report, cfg.out_path);
  std::cout << "suite " << cfg.suite << ": " << report.total - report.failed << "/"
            << report.total << " records passed, worst ratio " << report.worst_ratio << " ("
            << report.worst_id << "), " << report.wall_ms << " ms\n";
  return report_exit_code(report);
}

int cmd_calibrate(const SuiteConfig& cfg, const std::string& constants_out) {
  ConstantsFile file = calibrate(cfg);
  file.save(constants_out);
  std::cout << "calibrated " << file.entries.size() << " entries -> " << constants_out << "\n";
  return 0;
}

int cmd_report(const std::string& in, const std::string& format) {
  std::ifstream f(in);
  if (!f) throw std::runtime_error("cannot open " + in);
  nlohmann::json j;
  f >> j;
  Report report = report_from_json(j);
  if (format == "csv")
    std::cout << report_to_csv(report);
  else
    std::cout << report_to_json(report).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometric estimate verification workbench"};
  app.require_subcommand(1);

  std::string suite, config_path, out_path, constants_path, report_in, format = "json";

  CLI::App* run = app.add_subcommand("run", "execute a verification suite");
  run->add_option("--suite", suite, "suite id (riemann|transport|complexlin|sobolev|elliptic|all)");
  run->add_option("--config", config_path, "JSON config path");
  run->add_option("--out", out_path, "report output path");
  run->add_option("--constants", constants_path, "constants file path");

  CLI::App* cal = app.add_subcommand("calibrate", "fit empirical constants");
  cal->add_option("--suite", suite, "suite id");
  cal->add_option("--config", config_path, "JSON config path");
  cal->add_option("--constants", constants_path, "constants output path")->required();

  CLI::App* rep = app.add_subcommand("report", "re-emit a report");
  rep->add_option("--in", report_in, "report JSON path")->required();
  rep->add_option("--format", format, "csv or json");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(load_config(config_path, suite, constants_path, out_path));
    if (cal->parsed()) {
      SuiteConfig cfg = load_config(config_path, suite, constants_path, out_path);
      return cmd_calibrate(cfg, constants_path);
    }
    if (rep->parsed()) return cmd_report(report_in, format);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
