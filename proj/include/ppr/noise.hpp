#pragma once

#include "ppr/types.hpp"

#include <cstdint>
#include <limits>

namespace ppr {

enum class NoiseKind { Poisson, Gaussian };

// Poisson: level is the peak scale nu applied to the ground truth before
// measuring. Gaussian: level is the target measurement SNR in dB, with
// +infinity meaning noiseless.
struct NoiseModel {
  NoiseKind kind = NoiseKind::Gaussian;
  double level = std::numeric_limits<double>::infinity();
};

struct PhaselessData {
  RealVector f;
  NoiseModel model;
  std::uint64_t seed = 0;
};

// f(i) ~ Poisson(h(i)) with per-index substreams. Throws on negative h.
PhaselessData corrupt_poisson(const RealVector& h, std::uint64_t seed);

// f = h + eps with eps rescaled after sampling so the measurement SNR
// 20 log10(|h|/|eps|) hits the target exactly. target = +inf returns h.
PhaselessData corrupt_gaussian(const RealVector& h, double target_snr_db, std::uint64_t seed);

// MAP fidelity B(h, f): 1/2 <h - f log h, 1> for Poisson data,
// 1/2 |h - f|^2 for Gaussian data.
double fidelity(const RealVector& h, const PhaselessData& data);

}  // namespace ppr
