#pragma once

#include "ppr/types.hpp"

namespace ppr {

// Closed-form per-entry proximal maps of the magnitude fidelities. Both act
// on the modulus and keep the phase of z0 (with sign(0) := 1).

// argmin_{x>0} 1/2 (x^2 - 2 f log x) + eta/2 (x - a)^2  for a = |z0|, f >= 0.
double prox_poisson_magnitude(double a, double f, double eta);

// argmin_{x>=0} 1/2 (x^2 - f)^2 + eta/2 (x - a)^2; the real nonnegative root
// of the depressed cubic x^3 + (eta/2 - f) x - eta a / 2 = 0, cross-checked
// against the objective at zero.
double prox_gaussian_magnitude(double a, double f, double eta);

SpectrumVector prox_poisson(const SpectrumVector& z0, const RealVector& f, double eta);
SpectrumVector prox_gaussian(const SpectrumVector& z0, const RealVector& f, double eta);

}  // namespace ppr
