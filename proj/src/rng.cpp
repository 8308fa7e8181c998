#include "ppr/rng.hpp"

#include <cmath>
#include <numbers>

namespace ppr {

double IndexStream::next_gaussian() {
  // Box-Muller, first member of the pair.
  const double u1 = next_u01_open();
  const double u2 = next_u01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// Poisson by sequential inversion; fine for small means.
std::uint64_t poisson_inversion(double mean, IndexStream& rng) {
  const double u = rng.next_u01();
  double p = std::exp(-mean);
  double cum = p;
  std::uint64_t k = 0;
  while (u > cum && k < 1000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cum += p;
  }
  return k;
}

// Hoermann's PTRS transformed rejection, valid for mean >= 10.
std::uint64_t poisson_ptrs(double mean, IndexStream& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = rng.next_u01() - 0.5;
    const double v = rng.next_u01_open();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * loglam - mean - std::lgamma(kf + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

}  // namespace

std::uint64_t poisson_sample(double mean, IndexStream& rng) {
  if (mean <= 0.0) return 0;
  if (mean < 10.0) return poisson_inversion(mean, rng);
  return poisson_ptrs(mean, rng);
}

}  // namespace ppr
