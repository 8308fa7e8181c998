#include "ppr/denoise.hpp"

#include "grad.hpp"
#include "ppr/fourier.hpp"

#include <cmath>

namespace ppr {

double tv_isotropic(const ComplexImage& v) {
  return (detail::dx(v).abs2() + detail::dy(v).abs2()).sqrt().sum();
}

// ADMM on the splitting p = grad v:
//   v-step  (I + gamma D^T D) v = v0 + D^T (gamma p + psi), solved by FFT
//   p-step  soft shrinkage of grad v - psi/gamma at sigma/gamma
//   psi    += gamma (p - grad v)
ComplexImage tv_denoise(const ComplexImage& v0, double sigma, double gamma, int iters) {
  if (sigma == 0.0) return v0;
  if (!(sigma > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("tv_denoise: bad parameters");

  const RealImage denom = 1.0 + gamma * detail::laplacian_symbol(v0.rows(), v0.cols());
  const double threshold = sigma / gamma;

  auto shrink = [&](const ComplexImage& tx, const ComplexImage& ty, ComplexImage& px,
                    ComplexImage& py) {
    const RealImage mag = (tx.abs2() + ty.abs2()).sqrt();
    const RealImage scale =
        (mag > threshold).select(1.0 - threshold / mag.max(1e-300), RealImage::Zero(mag.rows(), mag.cols()));
    px = scale.cast<Complex>() * tx;
    py = scale.cast<Complex>() * ty;
  };

  ComplexImage v = v0;
  ComplexImage gx = detail::dx(v), gy = detail::dy(v);
  ComplexImage px(v.rows(), v.cols()), py(v.rows(), v.cols());
  shrink(gx, gy, px, py);
  ComplexImage psix = ComplexImage::Zero(v.rows(), v.cols());
  ComplexImage psiy = psix;

  for (int k = 0; k < iters; ++k) {
    const ComplexImage rhs = v0 + detail::dx_adjoint(gamma * px + psix) +
                             detail::dy_adjoint(gamma * py + psiy);
    v = idft2_unitary(dft2_unitary(rhs) / denom.cast<Complex>());

    gx = detail::dx(v);
    gy = detail::dy(v);
    shrink(gx - psix / gamma, gy - psiy / gamma, px, py);

    psix += gamma * (px - gx);
    psiy += gamma * (py - gy);
  }
  return v;
}

}  // namespace ppr
