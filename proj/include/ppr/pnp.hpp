#pragma once

#include "ppr/denoise.hpp"
#include "ppr/gls.hpp"
#include "ppr/noise.hpp"
#include "ppr/operators.hpp"
#include "ppr/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace ppr {

enum class Initializer { Backprojection, RandomComplex, Custom };

struct PnpConfig {
  double lambda = 0.0;  // regularization weight; denoiser strength is lambda / r
  double r = 1.0;       // outer penalty
  double eta = 1.0;     // inner penalty
  int outer_iters = 50;
  int inner_iters = 5;
  ConstraintSet constraint = ConstraintSet::ComplexPlane;
  DenoiserSpec denoiser;
  bool symmetric = true;
  std::uint64_t seed = 0;
  Initializer init = Initializer::Backprojection;
  ComplexImage custom_init;  // used when init == Initializer::Custom

  // Test hook: observes the strength handed to the denoiser each iteration.
  std::function<void(int, double)> denoise_observer;
  // Streaming hook: called with each finished iteration record.
  std::function<void(const struct IterationRecord&)> on_iteration;
};

struct IterationRecord {
  int iter = 0;
  double rel_err = 0.0;
  double snr_db = 0.0;  // NaN when no ground truth is supplied
  double fidelity = 0.0;
  double pnp_residual = 0.0;  // |u - v|
};

struct RunHistory {
  std::vector<IterationRecord> records;
  bool diverged = false;
};

struct PnpState {
  ComplexImage u, v, multiplier;
  GlsState gls;
};

struct PnpResult {
  ComplexImage reconstruction;  // v after the last iteration
  RunHistory history;
  PnpState state;
};

// Outer plug-and-play ADMM: GLS step, half multiplier update (skipped when
// symmetric is off), denoise step, half multiplier update. Aborts with
// history.diverged once the relative error exceeds 1e6.
PnpResult pnp_run(const MeasurementOperator& op, const PhaselessData& data, const PnpConfig& cfg,
                  const ComplexImage* ground_truth = nullptr);

// Relative residuals of the three fixed-point equations
// u = Prox_{G/r+I_K}(v - L/r), v = D_sigma(u + L/r), u = v.
std::array<double, 3> fixed_point_residual(const PnpState& state, const MeasurementOperator& op,
                                           const PhaselessData& data, const PnpConfig& cfg);

// -20 log10(|c* u~ - u| / |u|) with the unit-modulus global phase c*
// aligning the candidate to the reference; capped at 300 dB.
double snr_db(const ComplexImage& candidate, const ComplexImage& reference);

}  // namespace ppr
