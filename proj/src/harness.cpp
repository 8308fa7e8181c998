#include "ppr/harness.hpp"

#include "ppr/io.hpp"
#include "ppr/phantoms.hpp"
#include "ppr/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace ppr {
namespace {

using nlohmann::json;

constexpr std::uint64_t kMaskSeedLabel = 0x6d61736b;   // operator sampling
constexpr std::uint64_t kNoiseSeedLabel = 0x6e6f6973;  // measurement corruption

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t label) {
  return splitmix64(seed ^ splitmix64(label));
}

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw std::runtime_error("configuration error: " + field + ": " + what);
}

const json& require(const json& parent, const std::string& key, const std::string& ctx) {
  const auto it = parent.find(key);
  if (it == parent.end()) config_error(ctx + "." + key, "missing");
  return *it;
}

template <typename T>
T value_or(const json& parent, const std::string& key, T fallback) {
  const auto it = parent.find(key);
  return it == parent.end() ? fallback : it->get<T>();
}

ComplexImage load_input(const ExperimentConfig& cfg) {
  const json& input = require(cfg.raw, "input", "config");
  if (input.contains("phantom")) {
    const auto name = input.at("phantom").get<std::string>();
    const auto size = require(input, "size", "input").get<Eigen::Index>();
    return make_phantom(name, size);
  }
  if (input.contains("image")) {
    const RealImage gray = read_grayscale(input.at("image").get<std::string>());
    return gray.cast<Complex>();
  }
  if (input.contains("c128")) return read_c128(input.at("c128").get<std::string>());
  config_error("input", "expected one of: phantom, image, c128");
}

ComplexImage build_probe(const json& geometry, Eigen::Index frame) {
  if (!geometry.contains("probe"))
    return quadratic_phase_probe(frame, 0.4 * static_cast<double>(frame), 6.0);
  const json& probe = geometry.at("probe");
  if (probe.contains("file")) return read_c128(probe.at("file").get<std::string>());
  const auto kind = value_or<std::string>(probe, "kind", "quadratic");
  const double radius = value_or<double>(probe, "radius", 0.4 * static_cast<double>(frame));
  if (kind == "disk") return flat_disk_probe(frame, radius);
  if (kind == "quadratic")
    return quadratic_phase_probe(frame, radius, value_or<double>(probe, "curvature", 6.0));
  config_error("geometry.probe.kind", "unknown probe kind '" + kind + "'");
}

MeasurementOperator build_operator(const ExperimentConfig& cfg, Eigen::Index rows,
                                   Eigen::Index cols) {
  const auto problem = require(cfg.raw, "problem", "config").get<std::string>();
  const json geometry = value_or<json>(cfg.raw, "geometry", json::object());
  if (problem == "cdp") {
    const int count = value_or<int>(geometry, "masks", 2);
    if (count < 1) config_error("geometry.masks", "K must be >= 1");
    return make_cdp_operator(octanary_masks(rows, cols, count, sub_seed(cfg.seed, kMaskSeedLabel)));
  }
  if (problem == "ptycho") {
    const auto frame = require(geometry, "frame", "geometry").get<Eigen::Index>();
    const auto stride = require(geometry, "stride", "geometry").get<Eigen::Index>();
    if (stride < 1) config_error("geometry.stride", "stride must be >= 1");
    Eigen::Index grid_rows, grid_cols;
    if (geometry.contains("grid")) {
      const auto grid = geometry.at("grid");
      grid_rows = grid.at(0).get<Eigen::Index>();
      grid_cols = grid.at(1).get<Eigen::Index>();
    } else {
      grid_rows = rows / stride;
      grid_cols = cols / stride;
    }
    const bool wrap = value_or<bool>(geometry, "wrap", true);
    return make_ptycho_operator(build_probe(geometry, frame),
                                scan_grid(grid_rows, grid_cols, stride), rows, cols, wrap);
  }
  config_error("problem", "expected 'cdp' or 'ptycho'");
}

DenoiserKind parse_denoiser_kind(const std::string& kind) {
  if (kind == "identity") return DenoiserKind::Identity;
  if (kind == "tv") return DenoiserKind::TV;
  if (kind == "tgv2") return DenoiserKind::TGV2;
  if (kind == "nlm") return DenoiserKind::NLM;
  if (kind == "bm3dlite") return DenoiserKind::BM3DLite;
  config_error("solver.denoiser.kind", "unknown denoiser '" + kind + "'");
}

std::filesystem::path data_path(const ExperimentConfig& cfg) { return cfg.out_dir / "data.f64"; }
std::filesystem::path truth_path(const ExperimentConfig& cfg) {
  return cfg.out_dir / "ground_truth.c128";
}
std::filesystem::path op_path(const ExperimentConfig& cfg) { return cfg.out_dir / "op.json"; }

MeasurementOperator load_operator(const ExperimentConfig& cfg) {
  std::ifstream in(op_path(cfg));
  if (!in) throw std::runtime_error("missing operator description: " + op_path(cfg).string());
  const json meta = json::parse(in);
  if (meta.at("kind") == "cdp") {
    std::vector<ComplexImage> masks;
    for (const auto& name : meta.at("masks"))
      masks.push_back(read_c128(cfg.out_dir / name.get<std::string>()));
    return make_cdp_operator(std::move(masks));
  }
  std::vector<std::array<Eigen::Index, 2>> positions;
  for (const auto& p : meta.at("positions"))
    positions.push_back({p.at(0).get<Eigen::Index>(), p.at(1).get<Eigen::Index>()});
  return make_ptycho_operator(read_c128(cfg.out_dir / meta.at("probe").get<std::string>()),
                              std::move(positions), meta.at("height").get<Eigen::Index>(),
                              meta.at("width").get<Eigen::Index>(),
                              meta.at("wrap").get<bool>());
}

Problem load_problem(const ExperimentConfig& cfg) {
  if (!std::filesystem::exists(data_path(cfg)))
    throw std::runtime_error("simulated data not found in " + cfg.out_dir.string() +
                             " (run simulate first)");
  Problem p{load_operator(cfg), read_phaseless(data_path(cfg)), read_c128(truth_path(cfg))};
  if (p.data.f.size() != output_size(p.op))
    throw std::runtime_error("data/operator size mismatch in " + cfg.out_dir.string());
  return p;
}

Problem ensure_problem(const ExperimentConfig& cfg) {
  if (!std::filesystem::exists(data_path(cfg))) cmd_simulate(cfg);
  return load_problem(cfg);
}

// Runs the solver on an existing problem, streaming the history CSV.
RunOutputs run_solver(const ExperimentConfig& cfg, const Problem& problem,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  RunOutputs out;
  out.hash = config_hash(cfg.raw);
  out.history_csv = dir / "history.csv";
  out.reconstruction = dir / "reconstruction.c128";
  out.summary_json = dir / "summary.json";

  PnpConfig pc = solver_config(cfg);
  std::ofstream csv(out.history_csv);
  if (!csv) throw std::runtime_error("cannot open " + out.history_csv.string());
  csv << "iter,rel_err,snr_db,fidelity,pnp_residual\n";
  pc.on_iteration = [&csv](const IterationRecord& r) {
    char line[256];
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.rel_err, r.snr_db,
                  r.fidelity, r.pnp_residual);
    csv << line;
    csv.flush();
  };

  const auto t0 = std::chrono::steady_clock::now();
  const PnpResult result = pnp_run(problem.op, problem.data, pc, &problem.ground_truth);
  const auto t1 = std::chrono::steady_clock::now();

  out.diverged = result.history.diverged;
  out.iterations = static_cast<int>(result.history.records.size());
  out.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.final_snr_db = snr_db(result.reconstruction, problem.ground_truth);

  write_c128(out.reconstruction, result.reconstruction);
  write_png_gray(dir / "reconstruction.png", result.reconstruction.abs());
  std::ofstream summary(out.summary_json);
  summary << json{{"final_snr_db", out.final_snr_db},
                  {"iterations", out.iterations},
                  {"wall_seconds", out.wall_seconds},
                  {"config_hash", out.hash},
                  {"diverged", out.diverged}}
                 .dump(2)
          << "\n";
  return out;
}

int iterations_to_threshold(const RunHistory& h, double slack_db) {
  if (h.records.empty()) return 0;
  const double target = h.records.back().snr_db - slack_db;
  for (const auto& r : h.records)
    if (r.snr_db >= target) return r.iter;
  return h.records.back().iter;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.raw = j;
  cfg.out_dir = value_or<std::string>(j, "output", "out");
  cfg.seed = value_or<std::uint64_t>(j, "seed", 0);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  return config_from_json(json::parse(in));
}

void apply_override(json& config, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("override must look like key.path=value: " + key_value);
  const std::string path = key_value.substr(0, eq);
  const std::string value = key_value.substr(eq + 1);

  json* node = &config;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw std::runtime_error("bad override path: " + path);
    if (dot == std::string::npos) {
      json parsed;
      try {
        parsed = json::parse(value);
      } catch (const json::parse_error&) {
        parsed = value;  // plain string
      }
      (*node)[key] = parsed;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

std::string config_hash(const json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Problem build_problem(const ExperimentConfig& cfg) {
  const ComplexImage input = load_input(cfg);
  MeasurementOperator op = build_operator(cfg, input.rows(), input.cols());

  const json noise = value_or<json>(cfg.raw, "noise", json{{"kind", "none"}});
  const auto kind = value_or<std::string>(noise, "kind", "none");
  const std::uint64_t noise_seed = sub_seed(cfg.seed, kNoiseSeedLabel);

  Problem problem{std::move(op), PhaselessData{}, input};
  if (kind == "poisson") {
    const double peak = require(noise, "peak", "noise").get<double>();
    if (!(peak > 0.0)) config_error("noise.peak", "peak level must be positive");
    problem.ground_truth = ComplexImage(peak * input);
    problem.data = corrupt_poisson(forward(problem.op, problem.ground_truth).abs2(), noise_seed);
    problem.data.model.level = peak;
  } else if (kind == "gaussian") {
    const double snr = require(noise, "snr_db", "noise").get<double>();
    problem.data = corrupt_gaussian(forward(problem.op, input).abs2(), snr, noise_seed);
  } else if (kind == "none") {
    RealVector h = forward(problem.op, input).abs2();
    problem.data = PhaselessData{std::move(h), NoiseModel{}, noise_seed};
  } else {
    config_error("noise.kind", "expected poisson, gaussian, or none");
  }
  return problem;
}

PnpConfig solver_config(const ExperimentConfig& cfg) {
  const json solver = value_or<json>(cfg.raw, "solver", json::object());
  PnpConfig pc;
  pc.lambda = value_or<double>(solver, "lambda", 0.0);
  pc.r = value_or<double>(solver, "r", 1.0);
  pc.eta = value_or<double>(solver, "eta", 1.0);
  pc.inner_iters = value_or<int>(solver, "inner_iters", 5);
  pc.symmetric = value_or<bool>(solver, "symmetric", true);
  pc.seed = cfg.seed;

  const auto constraint = value_or<std::string>(solver, "constraint", "complex");
  if (constraint == "real")
    pc.constraint = ConstraintSet::RealPlane;
  else if (constraint == "complex")
    pc.constraint = ConstraintSet::ComplexPlane;
  else
    config_error("solver.constraint", "expected 'real' or 'complex'");

  const auto init = value_or<std::string>(solver, "init", "backprojection");
  if (init == "random")
    pc.init = Initializer::RandomComplex;
  else if (init == "backprojection")
    pc.init = Initializer::Backprojection;
  else
    config_error("solver.init", "expected 'backprojection' or 'random'");

  const json den = value_or<json>(solver, "denoiser", json{{"kind", "identity"}});
  DenoiserSpec spec;
  spec.kind = parse_denoiser_kind(value_or<std::string>(den, "kind", "identity"));
  spec.gamma = value_or<double>(den, "gamma", spec.gamma);
  spec.iters = value_or<int>(den, "iters", spec.iters);
  spec.tgv_alpha_ratio = value_or<double>(den, "alpha_ratio", spec.tgv_alpha_ratio);
  spec.patch_radius = value_or<int>(den, "patch_radius", spec.patch_radius);
  spec.search_radius = value_or<int>(den, "search_radius", spec.search_radius);
  spec.nlm_h_scale = value_or<double>(den, "h_scale", spec.nlm_h_scale);
  spec.block = value_or<int>(den, "block", spec.block);
  spec.group = value_or<int>(den, "group", spec.group);
  spec.bm3d_search = value_or<int>(den, "search", spec.bm3d_search);
  spec.threshold_mult = value_or<double>(den, "threshold_mult", spec.threshold_mult);
  spec.bm3d_step = value_or<int>(den, "step", spec.bm3d_step);
  pc.denoiser = spec;

  // Paper-style caps: 50 for the unregularized and TV runs, 30 for the rest.
  const bool light = spec.kind == DenoiserKind::Identity || spec.kind == DenoiserKind::TV;
  pc.outer_iters = value_or<int>(solver, "outer_iters", light ? 50 : 30);
  return pc;
}

SimulateOutputs cmd_simulate(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const Problem problem = build_problem(cfg);

  SimulateOutputs out;
  out.ground_truth = truth_path(cfg);
  out.operator_json = op_path(cfg);
  out.data = data_path(cfg);

  write_c128(out.ground_truth, problem.ground_truth);
  write_png_gray(cfg.out_dir / "ground_truth.png", problem.ground_truth.abs());

  json meta;
  if (const auto* cdp = std::get_if<CdpOperator>(&problem.op)) {
    meta["kind"] = "cdp";
    std::vector<std::string> names;
    for (std::size_t k = 0; k < cdp->masks.size(); ++k) {
      names.push_back("mask_" + std::to_string(k) + ".c128");
      write_c128(cfg.out_dir / names.back(), cdp->masks[k]);
    }
    meta["masks"] = names;
    meta["height"] = cdp->masks.front().rows();
    meta["width"] = cdp->masks.front().cols();
  } else {
    const auto& pty = std::get<PtychoOperator>(problem.op);
    meta["kind"] = "ptycho";
    meta["probe"] = "probe.c128";
    write_c128(cfg.out_dir / "probe.c128", pty.probe);
    json positions = json::array();
    for (const auto& p : pty.positions) positions.push_back({p[0], p[1]});
    meta["positions"] = positions;
    meta["wrap"] = pty.periodic_wrap;
    meta["height"] = pty.image_rows;
    meta["width"] = pty.image_cols;
  }
  std::ofstream op_out(out.operator_json);
  op_out << meta.dump(2) << "\n";

  write_phaseless(out.data, problem.data);

  json config_copy = cfg.raw;
  config_copy["hash"] = config_hash(cfg.raw);
  std::ofstream cfg_out(cfg.out_dir / "config.json");
  cfg_out << config_copy.dump(2) << "\n";
  return out;
}

RunOutputs cmd_run(const ExperimentConfig& cfg) {
  return run_solver(cfg, load_problem(cfg), cfg.out_dir);
}

SweepOutputs cmd_sweep(const ExperimentConfig& cfg, const std::string& axis, int l) {
  if (axis != "lambda" && axis != "r") config_error("sweep.axis", "expected 'lambda' or 'r'");
  if (l < 0) config_error("sweep.l", "l must be nonnegative");
  const Problem problem = ensure_problem(cfg);
  const json solver = value_or<json>(cfg.raw, "solver", json::object());
  const double base = value_or<double>(solver, axis, axis == "lambda" ? 0.0 : 1.0);

  SweepOutputs out;
  out.csv = cfg.out_dir / ("sweep_" + axis + ".csv");
  std::ofstream csv(out.csv);
  csv << "factor," << axis << ",final_snr_db\n";

  for (int i = -l; i <= l; ++i) {
    const double factor = std::pow(2.0, i);
    ExperimentConfig point = cfg;
    point.raw["solver"][axis] = base * factor;
    const auto run = run_solver(point, problem,
                                cfg.out_dir / ("sweep_" + axis) / ("point_" + std::to_string(i + l)));
    char line[128];
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", factor, base * factor,
                  run.final_snr_db);
    csv << line;
    out.points.push_back({factor, base * factor, run.final_snr_db});
  }

  const auto best = std::max_element(out.points.begin(), out.points.end(),
                                     [](const SweepPoint& a, const SweepPoint& b) {
                                       return a.final_snr_db < b.final_snr_db;
                                     });
  out.argmax_factor = best->factor;
  out.endpoints_below_peak = out.points.size() < 2 ||
                             (out.points.front().final_snr_db < best->final_snr_db &&
                              out.points.back().final_snr_db < best->final_snr_db);
  std::ofstream summary(cfg.out_dir / ("sweep_" + axis + "_summary.json"));
  summary << json{{"axis", axis},
                  {"argmax_factor", out.argmax_factor},
                  {"endpoints_below_peak", out.endpoints_below_peak},
                  {"config_hash", config_hash(cfg.raw)}}
                 .dump(2)
          << "\n";
  return out;
}

SymmetryOutputs cmd_compare_symmetry(const ExperimentConfig& cfg) {
  const Problem problem = ensure_problem(cfg);

  SymmetryOutputs out;
  for (const bool symmetric : {true, false}) {
    ExperimentConfig variant = cfg;
    variant.raw["solver"]["symmetric"] = symmetric;
    const auto dir = cfg.out_dir / "symmetry" / (symmetric ? "symmetric" : "asymmetric");
    const auto run = run_solver(variant, problem, dir);

    // Re-read the streamed history for the iterations-to-threshold summary.
    RunHistory history;
    std::ifstream csv(run.history_csv);
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
      IterationRecord r;
      std::sscanf(line.c_str(), "%d,%lg,%lg,%lg,%lg", &r.iter, &r.rel_err, &r.snr_db, &r.fidelity,
                  &r.pnp_residual);
      history.records.push_back(r);
    }
    const int iters = iterations_to_threshold(history, 0.5);
    if (symmetric) {
      out.iters_to_threshold_symmetric = iters;
      out.final_snr_symmetric = run.final_snr_db;
      out.symmetric_csv = run.history_csv;
    } else {
      out.iters_to_threshold_asymmetric = iters;
      out.final_snr_asymmetric = run.final_snr_db;
      out.asymmetric_csv = run.history_csv;
    }
  }

  out.summary_json = cfg.out_dir / "symmetry" / "summary.json";
  std::ofstream summary(out.summary_json);
  summary << json{{"iters_to_threshold_symmetric", out.iters_to_threshold_symmetric},
                  {"iters_to_threshold_asymmetric", out.iters_to_threshold_asymmetric},
                  {"final_snr_symmetric", out.final_snr_symmetric},
                  {"final_snr_asymmetric", out.final_snr_asymmetric},
                  {"config_hash", config_hash(cfg.raw)}}
                 .dump(2)
          << "\n";
  return out;
}

std::vector<std::string> list_presets(const std::filesystem::path& presets_dir) {
  std::vector<std::string> names;
  if (!std::filesystem::exists(presets_dir)) return names;
  for (const auto& entry : std::filesystem::directory_iterator(presets_dir))
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace ppr
