#pragma once

#include "ppr/types.hpp"

namespace ppr {

// 2-D discrete Fourier transform in the unitary convention: Parseval holds
// exactly and the inverse is the adjoint. dft2_unitary(delta) is the constant
// 1/sqrt(n) image.
ComplexImage dft2_unitary(const ComplexImage& img);
ComplexImage idft2_unitary(const ComplexImage& img);

}  // namespace ppr
