#pragma once

#include "ppr/types.hpp"

namespace ppr::detail {

// Forward differences with periodic boundary. x runs along columns, y along
// rows; adjoints are the matching negated backward differences so that
// <Dv, p> = <v, D^T p> holds exactly.

inline ComplexImage dx(const ComplexImage& v) {
  ComplexImage g(v.rows(), v.cols());
  const Eigen::Index n2 = v.cols();
  for (Eigen::Index j = 0; j < n2; ++j) g.col(j) = v.col((j + 1) % n2) - v.col(j);
  return g;
}

inline ComplexImage dy(const ComplexImage& v) {
  ComplexImage g(v.rows(), v.cols());
  const Eigen::Index n1 = v.rows();
  for (Eigen::Index i = 0; i < n1; ++i) g.row(i) = v.row((i + 1) % n1) - v.row(i);
  return g;
}

inline ComplexImage dx_adjoint(const ComplexImage& p) {
  ComplexImage g(p.rows(), p.cols());
  const Eigen::Index n2 = p.cols();
  for (Eigen::Index j = 0; j < n2; ++j) g.col(j) = p.col((j + n2 - 1) % n2) - p.col(j);
  return g;
}

inline ComplexImage dy_adjoint(const ComplexImage& p) {
  ComplexImage g(p.rows(), p.cols());
  const Eigen::Index n1 = p.rows();
  for (Eigen::Index i = 0; i < n1; ++i) g.row(i) = p.row((i + n1 - 1) % n1) - p.row(i);
  return g;
}

// DFT symbol of D^T D summed over both axes: 4 sin^2(pi p / n1) + 4 sin^2(pi q / n2).
inline RealImage laplacian_symbol(Eigen::Index rows, Eigen::Index cols) {
  RealImage sym(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double sr = std::sin(EIGEN_PI * static_cast<double>(i) / static_cast<double>(rows));
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double sc = std::sin(EIGEN_PI * static_cast<double>(j) / static_cast<double>(cols));
      sym(i, j) = 4.0 * sr * sr + 4.0 * sc * sc;
    }
  }
  return sym;
}

}  // namespace ppr::detail
