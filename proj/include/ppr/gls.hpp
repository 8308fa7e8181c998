#pragma once

#include "ppr/noise.hpp"
#include "ppr/operators.hpp"
#include "ppr/types.hpp"

namespace ppr {

enum class ConstraintSet { ComplexPlane, RealPlane };

// Inner ADMM state for the generalized least squares step, with splitting
// z = A u and multiplier for the splitting constraint.
struct GlsState {
  ComplexImage u;
  SpectrumVector z;
  SpectrumVector multiplier;
  int iterations = 0;
};

struct GlsParams {
  double r = 1.0;
  double eta = 1.0;
  ConstraintSet constraint = ConstraintSet::ComplexPlane;
  int inner_iters = 5;
};

// Exact solve of (eta A*A + r I) u = A*(eta z + multiplier) + r g via the
// diagonal of A*A; RealPlane projects out the imaginary part afterwards.
ComplexImage u_update(const MeasurementOperator& op, const SpectrumVector& z,
                      const SpectrumVector& multiplier, const ComplexImage& g, double r,
                      double eta, ConstraintSet constraint);

// inner_iters sweeps of (u, z, multiplier). Cold start: u = g, z = A g,
// multiplier = 0; a warm state carries over between outer iterations.
GlsState gls_solve(const MeasurementOperator& op, const PhaselessData& data,
                   const ComplexImage& g, const GlsParams& params,
                   const GlsState* warm = nullptr);

}  // namespace ppr
