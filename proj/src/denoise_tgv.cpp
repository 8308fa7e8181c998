#include "ppr/denoise.hpp"

#include "grad.hpp"

#include <cmath>

namespace ppr {

// Chambolle-Pock on  min_{v,w} 1/2 |v - v0|^2 + a1 |grad v - w|_1 + a0 |E w|_1
// with E the symmetrized gradient; a1 = sigma, a0 = sigma / alpha_ratio.
// gamma skews the primal/dual step split, step product 1/L^2 with L^2 = 12.
ComplexImage tgv2_denoise(const ComplexImage& v0, double sigma, double alpha_ratio, double gamma,
                          int iters) {
  if (sigma == 0.0) return v0;
  if (!(sigma > 0.0) || !(alpha_ratio > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("tgv2_denoise: bad parameters");

  const double a1 = sigma;
  const double a0 = sigma / alpha_ratio;
  const double lnorm = std::sqrt(12.0);
  const double tp = gamma / lnorm;        // primal step
  const double td = 1.0 / (gamma * lnorm);  // dual step

  const Eigen::Index n1 = v0.rows(), n2 = v0.cols();
  const ComplexImage zero = ComplexImage::Zero(n1, n2);

  ComplexImage v = v0, vbar = v0;
  ComplexImage w1 = zero, w2 = zero, w1bar = zero, w2bar = zero;
  ComplexImage p1 = zero, p2 = zero;           // dual of grad v - w
  ComplexImage q11 = zero, q22 = zero, q12 = zero;  // dual of E w

  for (int k = 0; k < iters; ++k) {
    // dual ascent + ball projections
    p1 += td * (detail::dx(vbar) - w1bar);
    p2 += td * (detail::dy(vbar) - w2bar);
    {
      const RealImage mag = (p1.abs2() + p2.abs2()).sqrt();
      const RealImage scale = (mag > a1).select(a1 / mag.max(1e-300), RealImage::Ones(n1, n2));
      p1 *= scale.cast<Complex>();
      p2 *= scale.cast<Complex>();
    }

    q11 += td * detail::dx(w1bar);
    q22 += td * detail::dy(w2bar);
    q12 += td * 0.5 * (detail::dy(w1bar) + detail::dx(w2bar));
    {
      const RealImage mag = (q11.abs2() + q22.abs2() + 2.0 * q12.abs2()).sqrt();
      const RealImage scale = (mag > a0).select(a0 / mag.max(1e-300), RealImage::Ones(n1, n2));
      q11 *= scale.cast<Complex>();
      q22 *= scale.cast<Complex>();
      q12 *= scale.cast<Complex>();
    }

    // primal descent; v has the quadratic data prox, w is free
    const ComplexImage v_new =
        (v - tp * (detail::dx_adjoint(p1) + detail::dy_adjoint(p2)) + tp * v0) / (1.0 + tp);
    const ComplexImage w1_new =
        w1 + tp * (p1 - detail::dx_adjoint(q11) - detail::dy_adjoint(q12));
    const ComplexImage w2_new =
        w2 + tp * (p2 - detail::dy_adjoint(q22) - detail::dx_adjoint(q12));

    vbar = 2.0 * v_new - v;
    w1bar = 2.0 * w1_new - w1;
    w2bar = 2.0 * w2_new - w2;
    v = v_new;
    w1 = w1_new;
    w2 = w2_new;
  }
  return v;
}

}  // namespace ppr
