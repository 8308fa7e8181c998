#include "ppr/pnp.hpp"

#include "ppr/rng.hpp"

#include <cmath>

namespace ppr {
namespace {

constexpr double kDivergenceGuard = 1e6;
constexpr double kSnrCapDb = 300.0;

ComplexImage initial_iterate(const MeasurementOperator& op, const PhaselessData& data,
                             const PnpConfig& cfg) {
  const auto shape = image_shape(op);
  if (cfg.init == Initializer::Custom) {
    if (cfg.custom_init.rows() != shape[0] || cfg.custom_init.cols() != shape[1])
      throw std::invalid_argument("pnp_run: custom initializer shape mismatch");
    ComplexImage u0 = cfg.custom_init;
    if (cfg.constraint == ConstraintSet::RealPlane) u0 = u0.real().cast<Complex>();
    return u0;
  }
  const RealImage diag = ata_diagonal(op);

  // Backprojection of the measured amplitudes with flat phase, normalized by
  // the diagonal of A*A.
  const SpectrumVector amplitude = data.f.max(0.0).sqrt().cast<Complex>();
  ComplexImage u0 = adjoint(op, amplitude) / (diag + 1e-12).cast<Complex>();

  if (cfg.init == Initializer::RandomComplex) {
    const double target_norm = std::max(norm(u0), 1e-12);
    ComplexImage rnd(shape[0], shape[1]);
    for (Eigen::Index i = 0; i < shape[0]; ++i)
      for (Eigen::Index j = 0; j < shape[1]; ++j) {
        IndexStream rng(cfg.seed, static_cast<std::uint64_t>(i * shape[1] + j));
        rnd(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
      }
    u0 = rnd * (target_norm / norm(rnd));
  }
  if (cfg.constraint == ConstraintSet::RealPlane) u0 = u0.real().cast<Complex>();
  return u0;
}

void check_config(const PnpConfig& cfg) {
  if (cfg.lambda < 0.0 || !(cfg.r > 0.0) || !(cfg.eta > 0.0) || cfg.outer_iters < 1 ||
      cfg.inner_iters < 1)
    throw std::invalid_argument("pnp_run: invalid configuration");
}

}  // namespace

double snr_db(const ComplexImage& candidate, const ComplexImage& reference) {
  if (candidate.rows() != reference.rows() || candidate.cols() != reference.cols())
    throw std::invalid_argument("snr_db: shape mismatch");
  const double ref_norm = norm(reference);
  if (!(ref_norm > 0.0)) throw std::domain_error("snr_db: zero reference");

  // Unit-modulus global phase minimizing |c u~ - u|.
  const Complex ip = inner(candidate, reference);
  const Complex c = std::abs(ip) > 0.0 ? std::conj(ip) / std::abs(ip) : Complex(1.0, 0.0);
  double ratio = norm(ComplexImage(c * candidate - reference)) / ref_norm;
  ratio = std::max(ratio, std::pow(10.0, -kSnrCapDb / 20.0));
  return -20.0 * std::log10(ratio);
}

PnpResult pnp_run(const MeasurementOperator& op, const PhaselessData& data, const PnpConfig& cfg,
                  const ComplexImage* ground_truth) {
  check_config(cfg);
  if (data.f.size() != output_size(op)) throw std::invalid_argument("pnp_run: data size mismatch");

  const double sigma = cfg.lambda / cfg.r;
  DenoiserSpec den = cfg.denoiser;
  den.sigma = sigma;

  GlsParams gls_params{cfg.r, cfg.eta, cfg.constraint, cfg.inner_iters};

  PnpState s;
  s.u = initial_iterate(op, data, cfg);
  s.v = s.u;
  s.multiplier = ComplexImage::Zero(s.u.rows(), s.u.cols());

  PnpResult result;
  ComplexImage u_prev = s.u;

  for (int k = 1; k <= cfg.outer_iters; ++k) {
    const ComplexImage g = s.v - s.multiplier / cfg.r;
    s.gls = gls_solve(op, data, g, gls_params, k == 1 ? nullptr : &s.gls);
    const ComplexImage& u_new = s.gls.u;

    ComplexImage half = cfg.symmetric ? ComplexImage(s.multiplier + cfg.r * (u_new - s.v))
                                      : s.multiplier;
    if (cfg.denoise_observer) cfg.denoise_observer(k, sigma);
    const ComplexImage v_new = denoise(den, u_new + half / cfg.r);
    s.multiplier = half + cfg.r * (u_new - v_new);
    s.u = u_new;
    s.v = v_new;

    IterationRecord rec;
    rec.iter = k;
    rec.rel_err = norm(ComplexImage(s.u - u_prev)) / std::max(norm(s.u), 1e-300);
    rec.snr_db = ground_truth ? snr_db(s.v, *ground_truth)
                              : std::numeric_limits<double>::quiet_NaN();
    rec.fidelity = fidelity(forward(op, s.u).abs2(), data);
    rec.pnp_residual = norm(ComplexImage(s.u - s.v));
    result.history.records.push_back(rec);
    if (cfg.on_iteration) cfg.on_iteration(rec);

    if (!(rec.rel_err <= kDivergenceGuard)) {
      result.history.diverged = true;
      break;
    }
    u_prev = s.u;
  }

  result.reconstruction = s.v;
  result.state = std::move(s);
  return result;
}

std::array<double, 3> fixed_point_residual(const PnpState& state, const MeasurementOperator& op,
                                           const PhaselessData& data, const PnpConfig& cfg) {
  const double tiny = 1e-300;
  const ComplexImage g = state.v - state.multiplier / cfg.r;
  // Deep cold solve: the residual measures distance to the exact prox, not to
  // the truncated inner iteration.
  const GlsState fresh = gls_solve(
      op, data, g, GlsParams{cfg.r, cfg.eta, cfg.constraint, std::max(cfg.inner_iters, 60)},
      nullptr);
  const double r1 = norm(ComplexImage(state.u - fresh.u)) / std::max(norm(state.u), tiny);

  DenoiserSpec den = cfg.denoiser;
  den.sigma = cfg.lambda / cfg.r;
  const ComplexImage vd = denoise(den, state.u + state.multiplier / cfg.r);
  const double r2 = norm(ComplexImage(state.v - vd)) / std::max(norm(state.v), tiny);

  const double r3 = norm(ComplexImage(state.u - state.v)) / std::max(norm(state.u), tiny);
  return {r1, r2, r3};
}

}  // namespace ppr
