#pragma once

#include <map>
#include <string>
#include <vector>

#include "lempert/disc_builder.hpp"
#include "lempert/svg.hpp"

namespace lempert::experiments {

// One experiment run, fully determined by this object (fixed seed included).
// Every verdict threshold lives here, never in the runner code.
struct ExperimentConfig {
  std::string experiment;  // example4 | theorem1 | proposition2 | estimates
  std::uint64_t seed = 20260809;

  // example4
  int k_min = 1, k_max = 6;
  double final_ratio_threshold = 0.05;
  double control_band = 0.1;  // disc control within [1-band, 1+band] of 1

  // theorem1
  std::vector<std::string> domains{"disc", "ellipse", "smoothed_rectangle", "ball2"};
  int anchor_pairs = 96;  // spacing must resolve the high-curvature ratio dips
  std::vector<double> distance_ladder{1e-1, 3e-2, 1e-2, 1e-3, 1e-4};
  double stability_tol = 0.05;      // +-5% under 2x refinement
  double disc_constant_floor = 0.49;
  bool run_builder = false;
  std::vector<double> builder_distances{0.2, 0.25, 0.3, 0.35, 0.4};
  int builder_anchor_pairs = 2;
  double builder_validity_tol = 1e-6;
  bool dump_certificates = false;

  // proposition2
  std::string family = "perturbed_ellipse";  // | constant_disc | scaled_disc
  int family_count = 20;
  double family_eps = 0.3;        // normalization d(f_j(0)) >= eps
  double family_amplitude = 0.15; // leading bump amplitude, decays as 1/j
  int family_frequency = 5;
  double stabilization_tol = 0.02;  // envelope widths of the last 5 members
  double derivative_cap = 10.0;
  std::vector<double> sample_radii{0.2, 0.5, 0.8, 0.95, 0.999};
  int samples_per_ring = 48;

  // estimates
  double koebe_tol = 1e-4;
  double separation = 0.5;     // pair separation for the star gap
  int pair_samples = 300;
  double star_gap_cap = 5.0;
  double lower_gap_cap = 5.0;
  double estimate2_spread_cap = 10.0;
  std::vector<double> ray_distances{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

  static ExperimentConfig defaults_for(const std::string& experiment);
  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct Verdict {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // human-readable comparison, e.g. "< 0.05"
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> row_errors;  // recorded per-sample failures
  std::map<std::string, double> aggregates;
  std::vector<Verdict> verdicts;
  std::vector<plot::SvgPlot> plots;
  std::vector<std::pair<std::string, std::string>> artifacts;  // filename -> content

  bool all_pass() const;
  std::string csv_text() const;
  std::string json_text() const;
};

ExperimentReport run_example4(const ExperimentConfig& cfg);
ExperimentReport run_theorem1(const ExperimentConfig& cfg);
ExperimentReport run_proposition2(const ExperimentConfig& cfg);
ExperimentReport run_estimates(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Writes report.csv, report.json, plots/*.svg and any artifacts under out_dir.
void write_outputs(const ExperimentReport& report, const std::string& out_dir);

}  // namespace lempert::experiments
