// Command-line front end: simulate phaseless measurements, run the
// plug-and-play solver, sweep parameters, and compare multiplier schedules.

#include "ppr/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_override;
  std::int64_t seed_override = -1;
  bool has_seed = false;
};

ppr::ExperimentConfig resolve(const CommonOpts& opts) {
  auto cfg = ppr::load_config(opts.config_path);
  for (const auto& kv : opts.overrides) ppr::apply_override(cfg.raw, kv);
  if (!opts.out_override.empty()) cfg.raw["output"] = opts.out_override;
  if (opts.has_seed) cfg.raw["seed"] = opts.seed_override;
  return ppr::config_from_json(cfg.raw);
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--override", opts.overrides, "dotted-path override, e.g. solver.lambda=7e2");
  cmd->add_option("--out", opts.out_override, "output directory override");
  cmd->add_option("--seed", opts.seed_override, "seed override")
      ->each([&opts](const std::string&) { opts.has_seed = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval from noisy phaseless diffraction measurements"};
  app.require_subcommand(1);

  CommonOpts sim_opts, run_opts, sweep_opts, sym_opts;
  std::string sweep_axis = "lambda";
  int sweep_l = 5;
  std::string presets_dir = "presets";

  auto* simulate = app.add_subcommand("simulate", "generate ground truth, operator, and data");
  add_common(simulate, sim_opts);

  auto* run = app.add_subcommand("run", "reconstruct from simulated data");
  add_common(run, run_opts);

  auto* sweep = app.add_subcommand("sweep", "vary lambda or r over powers of two");
  add_common(sweep, sweep_opts);
  sweep->add_option("--axis", sweep_axis, "lambda or r")->check(CLI::IsMember({"lambda", "r"}));
  sweep->add_option("--l", sweep_l, "factors span 2^-l .. 2^l");

  auto* symmetry = app.add_subcommand("compare-symmetry",
                                      "symmetric vs asymmetric multiplier updates");
  add_common(symmetry, sym_opts);

  auto* presets = app.add_subcommand("presets", "preset configurations");
  auto* presets_list = presets->add_subcommand("list", "list shipped presets");
  presets_list->add_option("--dir", presets_dir, "presets directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto out = ppr::cmd_simulate(resolve(sim_opts));
      std::cout << "wrote " << out.ground_truth.string() << "\n"
                << "wrote " << out.operator_json.string() << "\n"
                << "wrote " << out.data.string() << "\n";
    } else if (run->parsed()) {
      const auto out = ppr::cmd_run(resolve(run_opts));
      std::printf("final_snr_db=%.4f iterations=%d wall_seconds=%.3f hash=%s\n", out.final_snr_db,
                  out.iterations, out.wall_seconds, out.hash.c_str());
      if (out.diverged) {
        std::cerr << "solver diverged; partial history kept at " << out.history_csv.string()
                  << "\n";
        return 3;
      }
    } else if (sweep->parsed()) {
      const auto out = ppr::cmd_sweep(resolve(sweep_opts), sweep_axis, sweep_l);
      std::printf("sweep over %s: argmax factor %g, endpoints below peak: %s\n",
                  sweep_axis.c_str(), out.argmax_factor,
                  out.endpoints_below_peak ? "yes" : "no");
      std::cout << "wrote " << out.csv.string() << "\n";
    } else if (symmetry->parsed()) {
      const auto out = ppr::cmd_compare_symmetry(resolve(sym_opts));
      std::printf("iterations to within 0.5 dB: symmetric %d, asymmetric %d\n",
                  out.iters_to_threshold_symmetric, out.iters_to_threshold_asymmetric);
      std::cout << "wrote " << out.summary_json.string() << "\n";
    } else if (presets_list->parsed()) {
      for (const auto& name : ppr::list_presets(presets_dir)) {
        std::ifstream in(std::filesystem::path(presets_dir) / (name + ".json"));
        nlohmann::json j = nlohmann::json::parse(in);
        std::cout << name << "  " << j.value("description", "") << "\n";
      }
    } else if (presets->parsed()) {
      std::cerr << "usage: presets list [--dir DIR]\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
