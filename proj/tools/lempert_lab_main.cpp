#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lempert/experiments.hpp"

using namespace lempert::experiments;

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the Lempert function and boundary-distance "
               "estimates on planar domains and complex balls"};

  std::string experiment;
  std::string config_path;
  std::string out_dir = "out";
  bool print_config = false;

  app.add_option("experiment", experiment,
                 "experiment to run: example4 | theorem1 | proposition2 | estimates")
      ->required();
  app.add_option("--config", config_path, "JSON config file (defaults when omitted)");
  app.add_option("--out", out_dir, "output directory (report.csv, report.json, plots/)");
  app.add_flag("--print-config", print_config,
               "print the effective config as JSON and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = ExperimentConfig::defaults_for(experiment);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open config: " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = ExperimentConfig::from_json(ss.str());
      cfg.experiment = experiment;  // the positional argument wins
    }
    if (print_config) {
      std::cout << cfg.to_json() << "\n";
      return 0;
    }

    ExperimentReport report = run_experiment(cfg);
    write_outputs(report, out_dir);

    for (const Verdict& v : report.verdicts) {
      std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << v.name << ": value " << v.value
                << " " << v.relation << " " << v.threshold << "\n";
    }
    if (!report.row_errors.empty())
      std::cout << report.row_errors.size() << " sample(s) recorded as failures\n";
    std::cout << (report.all_pass() ? "ALL VERDICTS PASS" : "VERDICT FAILURES PRESENT")
              << "  (" << report.rows.size() << " rows -> " << out_dir << ")\n";
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
