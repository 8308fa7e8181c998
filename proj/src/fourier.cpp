#include "ppr/fourier.hpp"

#include <unsupported/Eigen/FFT>

namespace ppr {
namespace {

void fft_cols(Eigen::MatrixXcd& m, bool inverse) {
  // Eigen::FFT caches plans per length, so one thread-local instance serves
  // every size that shows up.
  thread_local Eigen::FFT<double> fft;
  Eigen::VectorXcd in(m.rows()), out(m.rows());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    in = m.col(c);
    if (inverse)
      fft.inv(out, in);
    else
      fft.fwd(out, in);
    m.col(c) = out;
  }
}

ComplexImage transform2d(const ComplexImage& img, bool inverse) {
  if (img.size() == 0) throw std::invalid_argument("dft2: empty image");
  Eigen::MatrixXcd m = img.matrix();
  fft_cols(m, inverse);
  m.transposeInPlace();
  fft_cols(m, inverse);
  m.transposeInPlace();
  // fwd is unnormalized and inv carries 1/n1 * 1/n2; rescale both to the
  // unitary convention.
  const double root_n = std::sqrt(static_cast<double>(img.size()));
  return m.array() * (inverse ? root_n : 1.0 / root_n);
}

}  // namespace

ComplexImage dft2_unitary(const ComplexImage& img) { return transform2d(img, false); }

ComplexImage idft2_unitary(const ComplexImage& img) { return transform2d(img, true); }

}  // namespace ppr
