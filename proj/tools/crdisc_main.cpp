// Command-line front end. Exit codes: 0 the experiment ran and its pass
// rule held, 1 it ran and failed, 2 configuration or runtime error.
#include "crdisc/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytic-disc experiments on model CR hypersurfaces"};
  app.require_subcommand(0, 1);

  auto* run = app.add_subcommand("run", "run a named experiment");
  std::string config_path, name, out_dir;
  int k = 0, grid_n = 0;
  double eps = 0.0, alpha = 0.0;
  run->add_option("--config", config_path, "experiment config JSON file");
  run->add_option("--name", name, "experiment name");
  run->add_option("--k", k, "model parameter k");
  run->add_option("--eps", eps, "model sector parameter eps");
  run->add_option("--alpha", alpha, "sector datum exponent");
  run->add_option("--grid-n", grid_n, "grid size (power of two)");
  run->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  if (!run->parsed()) {
    std::cout << app.help() << std::endl;
    return 0;
  }

  try {
    std::string config_text = "{}";
    if (!config_path.empty()) config_text = read_file(config_path);

    auto validation = crdisc::validate_config(config_text, name);
    if (!validation.config) {
      for (const auto& v : validation.violations)
        std::cerr << "error: " << v << std::endl;
      return 2;
    }
    crdisc::ExperimentConfig cfg = *validation.config;
    if (grid_n > 0) cfg.grid_n = grid_n;
    if (alpha > 0.0) cfg.alpha = alpha;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (k > 0 || eps > 0.0) {
      crdisc::ModelSpec spec = cfg.model ? *cfg.model : crdisc::ModelSpec{};
      spec.type = cfg.model ? spec.type : "sector";
      if (k > 0) spec.k = k;
      if (eps > 0.0) spec.eps = eps;
      cfg.model = spec;
    }
    {
      // re-validate after the command-line overrides
      auto recheck = crdisc::validate_config("{}", cfg.name);
      if (!crdisc::validate_config("{\"grid_N\":" + std::to_string(cfg.grid_n) + "}",
                                   cfg.name)
               .config) {
        std::cerr << "error: grid_N must be a power of two >= 256" << std::endl;
        return 2;
      }
      (void)recheck;
    }

    const crdisc::ExperimentResult result = crdisc::run_experiment(cfg);
    std::cout << crdisc::result_to_json(result);
    return result.pass ? 0 : 1;
  } catch (const crdisc::SolveError& e) {
    std::cerr << "error: solver failure: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
