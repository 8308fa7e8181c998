#pragma once

#include "ppr/noise.hpp"
#include "ppr/operators.hpp"
#include "ppr/pnp.hpp"
#include "ppr/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace ppr {

// A validated experiment description. `raw` keeps the canonical JSON
// (problem, geometry, noise, solver, input, output, seed) that every output
// hash refers back to.
struct ExperimentConfig {
  nlohmann::json raw;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// --override key=value with dotted paths, e.g. solver.lambda=7e2.
void apply_override(nlohmann::json& config, const std::string& key_value);

// FNV-1a over the canonical dump; recorded in every summary for exact reruns.
std::string config_hash(const nlohmann::json& config);

// In-memory materialization of a simulation, deterministic from config+seed.
struct Problem {
  MeasurementOperator op;
  PhaselessData data;
  ComplexImage ground_truth;  // same scale as the data (nu-scaled for Poisson)
};

Problem build_problem(const ExperimentConfig& cfg);
PnpConfig solver_config(const ExperimentConfig& cfg);

// simulate: ground truth, operator description, and data files under out_dir.
struct SimulateOutputs {
  std::filesystem::path ground_truth;
  std::filesystem::path operator_json;
  std::filesystem::path data;
};
SimulateOutputs cmd_simulate(const ExperimentConfig& cfg);

// run: reconstruction (c128 + PNG preview), history CSV, summary JSON.
// Requires the simulate outputs to be present in out_dir.
struct RunOutputs {
  double final_snr_db = 0.0;
  int iterations = 0;
  double wall_seconds = 0.0;
  std::string hash;
  bool diverged = false;
  std::filesystem::path reconstruction;
  std::filesystem::path history_csv;
  std::filesystem::path summary_json;
};
RunOutputs cmd_run(const ExperimentConfig& cfg);

// sweep over lambda or r with factors 2^-l .. 2^l.
struct SweepPoint {
  double factor = 1.0;
  double value = 0.0;
  double final_snr_db = 0.0;
};
struct SweepOutputs {
  std::vector<SweepPoint> points;
  double argmax_factor = 1.0;
  bool endpoints_below_peak = false;
  std::filesystem::path csv;
};
SweepOutputs cmd_sweep(const ExperimentConfig& cfg, const std::string& axis, int l);

// symmetric vs asymmetric multiplier updates on the same data.
struct SymmetryOutputs {
  int iters_to_threshold_symmetric = 0;
  int iters_to_threshold_asymmetric = 0;
  double final_snr_symmetric = 0.0;
  double final_snr_asymmetric = 0.0;
  std::filesystem::path symmetric_csv;
  std::filesystem::path asymmetric_csv;
  std::filesystem::path summary_json;
};
SymmetryOutputs cmd_compare_symmetry(const ExperimentConfig& cfg);

std::vector<std::string> list_presets(const std::filesystem::path& presets_dir);

}  // namespace ppr
