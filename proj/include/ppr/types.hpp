#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace ppr {

using Complex = std::complex<double>;

// Images are n1 x n2 arrays indexed (row, col); vectors derived from them use
// lexicographic (row-major) order, which is also the on-disk layout.
using ComplexImage = Eigen::ArrayXXcd;
using RealImage = Eigen::ArrayXXd;

// Stacked measurement frames of a linear operator, length m.
using SpectrumVector = Eigen::ArrayXcd;
using RealVector = Eigen::ArrayXd;

inline double norm(const ComplexImage& x) { return std::sqrt(x.abs2().sum()); }
inline double norm(const SpectrumVector& x) { return std::sqrt(x.abs2().sum()); }
inline double norm(const RealVector& x) { return std::sqrt(x.abs2().sum()); }

inline Complex inner(const SpectrumVector& a, const SpectrumVector& b) {
  return (a * b.conjugate()).sum();
}
inline Complex inner(const ComplexImage& a, const ComplexImage& b) {
  return (a * b.conjugate()).sum();
}

inline bool all_finite(const ComplexImage& img) {
  return img.real().isFinite().all() && img.imag().isFinite().all();
}

// Row-major flattening of an image into a frame slice and back.
inline void flatten_into(const ComplexImage& img, Complex* dst) {
  for (Eigen::Index i = 0; i < img.rows(); ++i)
    for (Eigen::Index j = 0; j < img.cols(); ++j) *dst++ = img(i, j);
}

inline ComplexImage unflatten(const Complex* src, Eigen::Index rows, Eigen::Index cols) {
  ComplexImage img(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) img(i, j) = *src++;
  return img;
}

}  // namespace ppr
