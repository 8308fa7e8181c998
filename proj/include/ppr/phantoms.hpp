#pragma once

#include "ppr/types.hpp"

#include <string>
#include <vector>

namespace ppr {

// Deterministic synthetic test images on the 8-bit value scale [0, 255].
//   shapes  - piecewise constant rectangles and a disk
//   ramps   - piecewise affine pyramids
//   tiles   - a repeated 8x8 texture motif
//   complex - magnitude from shapes, phase from ramps
ComplexImage make_phantom(const std::string& name, Eigen::Index size);

std::vector<std::string> phantom_names();

}  // namespace ppr
