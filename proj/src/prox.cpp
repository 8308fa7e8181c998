#include "ppr/prox.hpp"

#include <algorithm>
#include <cmath>

namespace ppr {
namespace {

void check_eta(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("prox: eta must be positive");
}

Complex unit_phase(Complex z) {
  const double m = std::abs(z);
  return m == 0.0 ? Complex(1.0, 0.0) : z / m;  // sign(0) := 1
}

}  // namespace

double prox_poisson_magnitude(double a, double f, double eta) {
  if (f < 0.0) throw std::domain_error("prox_poisson: negative data entry");
  // positive root of (1+eta) x^2 - eta a x - f = 0
  return (eta * a + std::sqrt(eta * eta * a * a + 4.0 * (1.0 + eta) * f)) / (2.0 * (1.0 + eta));
}

double prox_gaussian_magnitude(double a, double f, double eta) {
  // Depressed cubic x^3 + p x + q = 0 for the stationary points.
  const double p = 0.5 * eta - f;
  const double q = -0.5 * eta * a;
  const double disc = p * p * p / 27.0 + q * q / 4.0;
  double x;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    x = std::cbrt(-0.5 * q + s) + std::cbrt(-0.5 * q - s);
  } else {
    // Three real roots (needs f > eta/2); the positive one is the largest.
    const double mp3 = -p / 3.0;
    const double theta = std::clamp((-0.5 * q) / std::sqrt(mp3 * mp3 * mp3), -1.0, 1.0);
    x = 2.0 * std::sqrt(mp3) * std::cos(std::acos(theta) / 3.0);
  }
  x = std::max(x, 0.0);
  // Guard Lemma-style uniqueness numerically: keep the better of {0, x}.
  const auto phi = [&](double t) {
    const double d = t * t - f;
    return 0.5 * d * d + 0.5 * eta * (t - a) * (t - a);
  };
  return phi(x) <= phi(0.0) ? x : 0.0;
}

SpectrumVector prox_poisson(const SpectrumVector& z0, const RealVector& f, double eta) {
  check_eta(eta);
  if (z0.size() != f.size()) throw std::invalid_argument("prox_poisson: length mismatch");
  SpectrumVector z(z0.size());
  for (Eigen::Index j = 0; j < z0.size(); ++j)
    z(j) = prox_poisson_magnitude(std::abs(z0(j)), f(j), eta) * unit_phase(z0(j));
  return z;
}

SpectrumVector prox_gaussian(const SpectrumVector& z0, const RealVector& f, double eta) {
  check_eta(eta);
  if (z0.size() != f.size()) throw std::invalid_argument("prox_gaussian: length mismatch");
  SpectrumVector z(z0.size());
  for (Eigen::Index j = 0; j < z0.size(); ++j)
    z(j) = prox_gaussian_magnitude(std::abs(z0(j)), f(j), eta) * unit_phase(z0(j));
  return z;
}

}  // namespace ppr
