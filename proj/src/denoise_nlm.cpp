#include "ppr/denoise.hpp"

#include <cmath>
#include <vector>

namespace ppr {
namespace {

inline Eigen::Index clamp_index(Eigen::Index i, Eigen::Index n) {
  return std::clamp<Eigen::Index>(i, 0, n - 1);
}

}  // namespace

ComplexImage nlm_denoise(const ComplexImage& v0, double h, int patch_radius, int search_radius) {
  if (patch_radius < 0 || search_radius < 0)
    throw std::invalid_argument("nlm_denoise: radii must be nonnegative");
  if (h < 1e-12) return v0;  // degenerate kernel, self weight dominates

  const Eigen::Index n1 = v0.rows(), n2 = v0.cols();
  const int f = patch_radius;

  // Gaussian patch kernel, normalized to sum 1.
  const int pw = 2 * f + 1;
  std::vector<double> kernel(static_cast<std::size_t>(pw) * pw);
  {
    double sum = 0.0;
    const double a = std::max(1.0, static_cast<double>(f));
    for (int ti = -f; ti <= f; ++ti)
      for (int tj = -f; tj <= f; ++tj) {
        const double g = std::exp(-(ti * ti + tj * tj) / (2.0 * a * a));
        kernel[static_cast<std::size_t>((ti + f) * pw + (tj + f))] = g;
        sum += g;
      }
    for (auto& g : kernel) g /= sum;
  }

  const double inv_h2 = 1.0 / (h * h);
  ComplexImage out(n1, n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n2; ++j) {
      double weight_sum = 0.0;
      Complex acc(0.0, 0.0);
      for (int di = -search_radius; di <= search_radius; ++di) {
        for (int dj = -search_radius; dj <= search_radius; ++dj) {
          const Eigen::Index yi = i + di, yj = j + dj;
          if (yi < 0 || yi >= n1 || yj < 0 || yj >= n2) continue;
          double d2 = 0.0;
          for (int ti = -f; ti <= f; ++ti)
            for (int tj = -f; tj <= f; ++tj) {
              const Complex d = v0(clamp_index(i + ti, n1), clamp_index(j + tj, n2)) -
                                v0(clamp_index(yi + ti, n1), clamp_index(yj + tj, n2));
              d2 += kernel[static_cast<std::size_t>((ti + f) * pw + (tj + f))] * std::norm(d);
            }
          const double w = std::exp(-d2 * inv_h2);
          weight_sum += w;
          acc += w * v0(yi, yj);
        }
      }
      out(i, j) = acc / weight_sum;  // self weight is 1, so the sum is positive
    }
  }
  return out;
}

}  // namespace ppr
