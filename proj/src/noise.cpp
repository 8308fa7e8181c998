#include "ppr/noise.hpp"

#include "ppr/rng.hpp"

#include <cmath>

namespace ppr {

PhaselessData corrupt_poisson(const RealVector& h, std::uint64_t seed) {
  if ((h < 0.0).any()) throw std::domain_error("corrupt_poisson: negative intensity");
  RealVector f(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    IndexStream rng(seed, static_cast<std::uint64_t>(i));
    f(i) = static_cast<double>(poisson_sample(h(i), rng));
  }
  return PhaselessData{std::move(f), NoiseModel{NoiseKind::Poisson, 0.0}, seed};
}

PhaselessData corrupt_gaussian(const RealVector& h, double target_snr_db, std::uint64_t seed) {
  const double h_norm = norm(h);
  if (!(h_norm > 0.0)) throw std::domain_error("corrupt_gaussian: zero measurement vector");
  if (std::isinf(target_snr_db))
    return PhaselessData{h, NoiseModel{NoiseKind::Gaussian, target_snr_db}, seed};

  RealVector eps(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    IndexStream rng(seed, static_cast<std::uint64_t>(i));
    eps(i) = rng.next_gaussian();
  }
  // Rescale after sampling so the measured SNR hits the target exactly.
  const double scale = h_norm * std::pow(10.0, -target_snr_db / 20.0) / norm(eps);
  RealVector f = h + scale * eps;
  return PhaselessData{std::move(f), NoiseModel{NoiseKind::Gaussian, target_snr_db}, seed};
}

double fidelity(const RealVector& h, const PhaselessData& data) {
  if (h.size() != data.f.size()) throw std::invalid_argument("fidelity: length mismatch");
  if (data.model.kind == NoiseKind::Gaussian) return 0.5 * (h - data.f).abs2().sum();

  double acc = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    const double hi = h(i);
    const double fi = data.f(i);
    if (fi > 0.0) {
      if (hi <= 0.0) throw std::domain_error("fidelity: log of nonpositive intensity");
      acc += hi - fi * std::log(hi);
    } else {
      acc += hi;  // f(i) = 0 contributes h(i) only
    }
  }
  return 0.5 * acc;
}

}  // namespace ppr
