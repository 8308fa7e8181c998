#include "ppr/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace ppr {
namespace {

// Orthonormal DCT-II matrix of size b.
Eigen::MatrixXd dct_matrix(int b) {
  Eigen::MatrixXd c(b, b);
  const double n = static_cast<double>(b);
  for (int k = 0; k < b; ++k) {
    const double s = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int i = 0; i < b; ++i)
      c(k, i) = s * std::cos(EIGEN_PI * (2.0 * i + 1.0) * k / (2.0 * n));
  }
  return c;
}

// In-place orthonormal Haar transform along a vector of power-of-two length.
void haar_forward(std::vector<Complex>& v) {
  const std::size_t n = v.size();
  std::vector<Complex> tmp(n);
  for (std::size_t len = n; len > 1; len /= 2) {
    for (std::size_t i = 0; i < len / 2; ++i) {
      tmp[i] = (v[2 * i] + v[2 * i + 1]) * std::numbers::sqrt2 * 0.5;
      tmp[len / 2 + i] = (v[2 * i] - v[2 * i + 1]) * std::numbers::sqrt2 * 0.5;
    }
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(len), v.begin());
  }
}

void haar_inverse(std::vector<Complex>& v) {
  const std::size_t n = v.size();
  std::vector<Complex> tmp(n);
  for (std::size_t len = 2; len <= n; len *= 2) {
    for (std::size_t i = 0; i < len / 2; ++i) {
      tmp[2 * i] = (v[i] + v[len / 2 + i]) * std::numbers::sqrt2 * 0.5;
      tmp[2 * i + 1] = (v[i] - v[len / 2 + i]) * std::numbers::sqrt2 * 0.5;
    }
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(len), v.begin());
  }
}

std::vector<Eigen::Index> reference_starts(Eigen::Index n, int block, int step) {
  std::vector<Eigen::Index> starts;
  for (Eigen::Index s = 0; s + block <= n; s += step) starts.push_back(s);
  if (starts.empty() || starts.back() != n - block) starts.push_back(n - block);
  return starts;
}

}  // namespace

ComplexImage bm3d_lite_denoise(const ComplexImage& v0, double sigma, int block, int group,
                               int search_radius, double threshold_mult, int step) {
  const Eigen::Index n1 = v0.rows(), n2 = v0.cols();
  if (block <= 0 || block > n1 || block > n2)
    throw std::invalid_argument("bm3d_lite: block exceeds image");
  if (group < 1 || step < 1 || search_radius < 0)
    throw std::invalid_argument("bm3d_lite: bad parameters");

  const Eigen::MatrixXcd dct = dct_matrix(block).cast<Complex>();
  const Eigen::MatrixXcd dct_t = dct.transpose();
  const double threshold = threshold_mult * sigma;

  ComplexImage num = ComplexImage::Zero(n1, n2);
  RealImage den = RealImage::Zero(n1, n2);

  const auto row_starts = reference_starts(n1, block, step);
  const auto col_starts = reference_starts(n2, block, step);

  std::vector<std::pair<double, std::pair<Eigen::Index, Eigen::Index>>> candidates;
  for (const Eigen::Index ri : row_starts) {
    for (const Eigen::Index rj : col_starts) {
      const auto ref = v0.block(ri, rj, block, block);

      // Raster-scan search window; ties keep the earliest index so grouping
      // is order independent. The reference block always heads its group,
      // which also guarantees every pixel ends up covered.
      candidates.clear();
      for (Eigen::Index ci = std::max<Eigen::Index>(0, ri - search_radius);
           ci <= std::min<Eigen::Index>(n1 - block, ri + search_radius); ++ci) {
        for (Eigen::Index cj = std::max<Eigen::Index>(0, rj - search_radius);
             cj <= std::min<Eigen::Index>(n2 - block, rj + search_radius); ++cj) {
          const bool self = ci == ri && cj == rj;
          const double d = self ? -1.0 : (v0.block(ci, cj, block, block) - ref).abs2().sum();
          candidates.push_back({d, {ci, cj}});
        }
      }
      std::stable_sort(candidates.begin(), candidates.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });

      // Largest power of two not exceeding min(group, available).
      std::size_t g = 1;
      const std::size_t limit = std::min<std::size_t>(static_cast<std::size_t>(group),
                                                      candidates.size());
      while (2 * g <= limit) g *= 2;

      // 2-D DCT per block; the real transform acts on re and im parts alike.
      std::vector<Eigen::MatrixXcd> stack(g);
      for (std::size_t t = 0; t < g; ++t) {
        const auto [ci, cj] = candidates[t].second;
        stack[t] = dct * v0.block(ci, cj, block, block).matrix() * dct_t;
      }

      // 1-D Haar across the group, hard threshold, inverse.
      long retained = 0;
      std::vector<Complex> line(g);
      for (int a = 0; a < block; ++a) {
        for (int b = 0; b < block; ++b) {
          for (std::size_t t = 0; t < g; ++t) line[t] = stack[t](a, b);
          haar_forward(line);
          for (std::size_t t = 0; t < g; ++t) {
            const bool dc = (a == 0 && b == 0 && t == 0);
            double re = line[t].real(), im = line[t].imag();
            if (!dc) {
              if (std::abs(re) < threshold) re = 0.0; else ++retained;
              if (std::abs(im) < threshold) im = 0.0; else ++retained;
            } else {
              retained += 2;
            }
            line[t] = Complex(re, im);
          }
          haar_inverse(line);
          for (std::size_t t = 0; t < g; ++t) stack[t](a, b) = line[t];
        }
      }

      const double weight = 1.0 / (1.0 + static_cast<double>(retained));
      for (std::size_t t = 0; t < g; ++t) {
        const auto [ci, cj] = candidates[t].second;
        num.block(ci, cj, block, block) += weight * (dct_t * stack[t] * dct).array();
        den.block(ci, cj, block, block) += weight;
      }
    }
  }

  // Reference blocks tile the image, so every pixel is covered.
  return num / den.cast<Complex>();
}

}  // namespace ppr
