#include "ppr/gls.hpp"

#include "ppr/prox.hpp"

namespace ppr {
namespace {

SpectrumVector apply_prox(const SpectrumVector& z0, const PhaselessData& data, double eta) {
  return data.model.kind == NoiseKind::Poisson ? prox_poisson(z0, data.f, eta)
                                               : prox_gaussian(z0, data.f, eta);
}

ComplexImage diagonal_solve(const RealImage& diag, const ComplexImage& rhs, double r, double eta) {
  if (r <= 0.0 && (eta * diag <= 0.0).any())
    throw std::runtime_error("u_update: singular diagonal with r = 0");
  return rhs / (eta * diag + r).cast<Complex>();
}

}  // namespace

ComplexImage u_update(const MeasurementOperator& op, const SpectrumVector& z,
                      const SpectrumVector& multiplier, const ComplexImage& g, double r,
                      double eta, ConstraintSet constraint) {
  const SpectrumVector weighted = eta * z + multiplier;  // eta (z + multiplier/eta)
  const ComplexImage rhs = adjoint(op, weighted) + r * g;
  ComplexImage u = diagonal_solve(ata_diagonal(op), rhs, r, eta);
  if (constraint == ConstraintSet::RealPlane) u = u.real().cast<Complex>();
  return u;
}

GlsState gls_solve(const MeasurementOperator& op, const PhaselessData& data,
                   const ComplexImage& g, const GlsParams& params, const GlsState* warm) {
  if (!(params.r > 0.0) || !(params.eta > 0.0))
    throw std::invalid_argument("gls_solve: r and eta must be positive");
  if (data.f.size() != output_size(op)) throw std::invalid_argument("gls_solve: data size mismatch");

  GlsState state;
  if (warm) {
    state = *warm;
  } else {
    state.u = g;
    state.z = forward(op, g);
    state.multiplier = SpectrumVector::Zero(data.f.size());
  }

  const RealImage diag = ata_diagonal(op);
  for (int k = 0; k < params.inner_iters; ++k) {
    const SpectrumVector weighted = params.eta * state.z + state.multiplier;
    const ComplexImage rhs = adjoint(op, weighted) + params.r * g;
    state.u = diagonal_solve(diag, rhs, params.r, params.eta);
    if (params.constraint == ConstraintSet::RealPlane) state.u = state.u.real().cast<Complex>();

    const SpectrumVector au = forward(op, state.u);
    const SpectrumVector z0 = au - state.multiplier / params.eta;
    state.z = apply_prox(z0, data, params.eta);
    state.multiplier += params.eta * (state.z - au);
    ++state.iterations;
  }
  return state;
}

}  // namespace ppr
