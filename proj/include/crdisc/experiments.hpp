// Named, configurable experiments over the library, with CSV/JSON
// artifacts and machine-checkable pass/fail summaries.
#pragma once

#include "crdisc/deformation.hpp"
#include "crdisc/sector.hpp"

#include <map>

namespace crdisc {

// Config JSON schema (exact field names, all optional except name):
//   {"name": str, "grid_N": int, "model": {...}, "sector": {"alpha": d,
//    "scale": d}, "bump": {"width": d}, "etas": [..], "nu_list": [..],
//    "output_dir": str, "seed": int}
struct ExperimentConfig {
  std::string name;
  int grid_n = 2048;
  std::optional<ModelSpec> model;
  double alpha = 0.0;  // 0 = use the experiment default
  double scale = 0.05;
  double bump_width = kPi / 8.0;
  std::vector<double> etas;
  std::vector<double> nu_list;
  std::string output_dir = "out";
  unsigned seed = 0;
};

struct ExperimentResult {
  std::string name;
  bool pass = false;
  std::map<std::string, double> metrics;
  std::vector<std::string> artifact_paths;
};

const std::vector<std::string>& experiment_names();

struct ConfigValidation {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> violations;  // complete list, never a partial config
};

// Parses and validates config JSON; cli_name, when nonempty, overrides the
// JSON name field. Defaults: grid_N = 2048, bump width pi/8, alpha chosen
// per experiment (1/k + 0.1 or 1/k - 0.1 for the sector sides).
ConfigValidation validate_config(const std::string& json_text,
                                 const std::string& cli_name = "");

// Runs the named pipeline, writes artifacts plus summary.json under
// output_dir, and evaluates the experiment's pass rule. Deterministic for
// fixed (config, seed). Solver failures propagate as SolveError.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string result_to_json(const ExperimentResult& result);

}  // namespace crdisc
