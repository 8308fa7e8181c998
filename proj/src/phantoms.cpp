#include "ppr/phantoms.hpp"

#include <cmath>
#include <numbers>

namespace ppr {
namespace {

RealImage shapes_phantom(Eigen::Index n) {
  RealImage img = RealImage::Constant(n, n, 32.0);
  const auto frac = [n](double f) { return static_cast<Eigen::Index>(f * static_cast<double>(n)); };

  img.block(frac(0.15), frac(0.08), frac(0.30), frac(0.32)).setConstant(192.0);
  img.block(frac(0.55), frac(0.15), frac(0.30), frac(0.35)).setConstant(96.0);
  img.block(frac(0.68), frac(0.62), frac(0.12), frac(0.28)).setConstant(160.0);

  const double ci = 0.33 * static_cast<double>(n), cj = 0.70 * static_cast<double>(n);
  const double radius = 0.16 * static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double di = static_cast<double>(i) - ci, dj = static_cast<double>(j) - cj;
      if (di * di + dj * dj <= radius * radius) img(i, j) = 255.0;
    }
  return img;
}

RealImage ramps_phantom(Eigen::Index n) {
  RealImage img = RealImage::Constant(n, n, 16.0);
  const auto pyramid = [&](double ci, double cj, double half, double height) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double d = std::max(std::abs(static_cast<double>(i) - ci * n),
                                  std::abs(static_cast<double>(j) - cj * n));
        const double v = height * (1.0 - d / (half * n));
        if (v > img(i, j)) img(i, j) = v;
      }
  };
  pyramid(0.32, 0.30, 0.26, 255.0);
  pyramid(0.68, 0.70, 0.22, 200.0);
  pyramid(0.25, 0.75, 0.14, 150.0);
  return img;
}

RealImage tiles_phantom(Eigen::Index n) {
  // An 8x8 motif repeated across the image, under a smooth envelope. The
  // envelope keeps the spectrum off a bare harmonic lattice (a flat tiling
  // makes the phase retrieval problem nearly degenerate) while the motif
  // still repeats everywhere for patch-grouping filters.
  RealImage motif(8, 8);
  motif << 40, 40, 60, 220, 220, 60, 40, 40,
           40, 80, 220, 255, 255, 220, 80, 40,
           60, 220, 255, 120, 120, 255, 220, 60,
           220, 255, 120, 20, 20, 120, 255, 220,
           220, 255, 120, 20, 20, 120, 255, 220,
           60, 220, 255, 120, 120, 255, 220, 60,
           40, 80, 220, 255, 255, 220, 80, 40,
           40, 40, 60, 220, 220, 60, 40, 40;
  RealImage img(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double ei = std::sin(std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
      const double ej = std::sin(std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n));
      img(i, j) = motif(i % 8, j % 8) * (0.35 + 0.65 * ei * ej);
    }
  return img;
}

}  // namespace

ComplexImage make_phantom(const std::string& name, Eigen::Index size) {
  if (size < 8) throw std::invalid_argument("make_phantom: size too small");
  if (name == "shapes") return shapes_phantom(size).cast<Complex>();
  if (name == "ramps") return ramps_phantom(size).cast<Complex>();
  if (name == "tiles") return tiles_phantom(size).cast<Complex>();
  if (name == "complex") {
    const RealImage mag = 0.25 * 255.0 + 0.75 * shapes_phantom(size);
    const RealImage phase =
        (ramps_phantom(size) / 255.0 - 0.5) * std::numbers::pi;
    ComplexImage img(size, size);
    for (Eigen::Index i = 0; i < size; ++i)
      for (Eigen::Index j = 0; j < size; ++j) img(i, j) = std::polar(mag(i, j), phase(i, j));
    return img;
  }
  throw std::invalid_argument("make_phantom: unknown phantom '" + name + "'");
}

std::vector<std::string> phantom_names() { return {"shapes", "ramps", "tiles", "complex"}; }

}  // namespace ppr
