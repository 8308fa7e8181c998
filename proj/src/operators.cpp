#include "ppr/operators.hpp"

#include "ppr/fourier.hpp"
#include "ppr/rng.hpp"

#include <cmath>
#include <numbers>

namespace ppr {
namespace {

Eigen::Index wrap_index(Eigen::Index i, Eigen::Index n) {
  i %= n;
  return i < 0 ? i + n : i;
}

void check_image_shape(const MeasurementOperator& op, const ComplexImage& u) {
  const auto shape = image_shape(op);
  if (u.rows() != shape[0] || u.cols() != shape[1])
    throw std::invalid_argument("operator/image shape mismatch");
}

void check_spectrum_size(const MeasurementOperator& op, const SpectrumVector& z) {
  if (z.size() != output_size(op)) throw std::invalid_argument("spectrum length mismatch");
}

ComplexImage extract_window(const PtychoOperator& op, const ComplexImage& u, Eigen::Index p) {
  const Eigen::Index s = op.probe.rows();
  const auto [r0, c0] = op.positions[static_cast<std::size_t>(p)];
  ComplexImage win(s, s);
  if (op.periodic_wrap) {
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = 0; j < s; ++j)
        win(i, j) = u(wrap_index(r0 + i, u.rows()), wrap_index(c0 + j, u.cols()));
  } else {
    win = u.block(r0, c0, s, s);
  }
  return win;
}

void scatter_window(const PtychoOperator& op, const ComplexImage& frame, Eigen::Index p,
                    ComplexImage& acc) {
  const Eigen::Index s = op.probe.rows();
  const auto [r0, c0] = op.positions[static_cast<std::size_t>(p)];
  if (op.periodic_wrap) {
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = 0; j < s; ++j)
        acc(wrap_index(r0 + i, acc.rows()), wrap_index(c0 + j, acc.cols())) += frame(i, j);
  } else {
    acc.block(r0, c0, s, s) += frame;
  }
}

}  // namespace

CdpOperator make_cdp_operator(std::vector<ComplexImage> masks) {
  if (masks.empty()) throw std::invalid_argument("cdp: at least one mask required");
  for (const auto& w : masks) {
    if (w.rows() != masks.front().rows() || w.cols() != masks.front().cols())
      throw std::invalid_argument("cdp: masks must share one shape");
    if (!all_finite(w)) throw std::invalid_argument("cdp: mask entries must be finite");
  }
  return CdpOperator{std::move(masks)};
}

PtychoOperator make_ptycho_operator(ComplexImage probe,
                                    std::vector<std::array<Eigen::Index, 2>> positions,
                                    Eigen::Index image_rows, Eigen::Index image_cols,
                                    bool periodic_wrap) {
  if (probe.rows() != probe.cols()) throw std::invalid_argument("ptycho: probe must be square");
  if (!all_finite(probe)) throw std::invalid_argument("ptycho: probe entries must be finite");
  const Eigen::Index s = probe.rows();
  if (s <= 0 || s > image_rows || s > image_cols)
    throw std::invalid_argument("ptycho: frame size exceeds image");
  if (positions.empty()) throw std::invalid_argument("ptycho: no scan positions");
  if (!periodic_wrap) {
    // Clip positions so every frame stays in range.
    for (auto& p : positions) {
      p[0] = std::clamp<Eigen::Index>(p[0], 0, image_rows - s);
      p[1] = std::clamp<Eigen::Index>(p[1], 0, image_cols - s);
    }
  }
  return PtychoOperator{std::move(probe), std::move(positions), image_rows, image_cols,
                        periodic_wrap};
}

Eigen::Index output_size(const MeasurementOperator& op) {
  if (const auto* cdp = std::get_if<CdpOperator>(&op))
    return static_cast<Eigen::Index>(cdp->masks.size()) * cdp->masks.front().size();
  const auto& pty = std::get<PtychoOperator>(op);
  return static_cast<Eigen::Index>(pty.positions.size()) * pty.probe.size();
}

std::array<Eigen::Index, 2> image_shape(const MeasurementOperator& op) {
  if (const auto* cdp = std::get_if<CdpOperator>(&op))
    return {cdp->masks.front().rows(), cdp->masks.front().cols()};
  const auto& pty = std::get<PtychoOperator>(op);
  return {pty.image_rows, pty.image_cols};
}

Eigen::Index frame_count(const MeasurementOperator& op) {
  if (const auto* cdp = std::get_if<CdpOperator>(&op))
    return static_cast<Eigen::Index>(cdp->masks.size());
  return static_cast<Eigen::Index>(std::get<PtychoOperator>(op).positions.size());
}

SpectrumVector forward(const MeasurementOperator& op, const ComplexImage& u) {
  check_image_shape(op, u);
  SpectrumVector out(output_size(op));
  if (const auto* cdp = std::get_if<CdpOperator>(&op)) {
    const Eigen::Index n = u.size();
    Eigen::Index offset = 0;
    for (const auto& w : cdp->masks) {
      const ComplexImage frame = dft2_unitary(w * u);
      flatten_into(frame, out.data() + offset);
      offset += n;
    }
    return out;
  }
  const auto& pty = std::get<PtychoOperator>(op);
  const Eigen::Index fs = pty.probe.size();
  for (Eigen::Index p = 0; p < frame_count(op); ++p) {
    const ComplexImage frame = dft2_unitary(pty.probe * extract_window(pty, u, p));
    flatten_into(frame, out.data() + p * fs);
  }
  return out;
}

ComplexImage adjoint(const MeasurementOperator& op, const SpectrumVector& z) {
  check_spectrum_size(op, z);
  const auto shape = image_shape(op);
  ComplexImage acc = ComplexImage::Zero(shape[0], shape[1]);
  if (const auto* cdp = std::get_if<CdpOperator>(&op)) {
    const Eigen::Index n = acc.size();
    Eigen::Index offset = 0;
    for (const auto& w : cdp->masks) {
      const ComplexImage frame = unflatten(z.data() + offset, shape[0], shape[1]);
      acc += w.conjugate() * idft2_unitary(frame);
      offset += n;
    }
    return acc;
  }
  const auto& pty = std::get<PtychoOperator>(op);
  const Eigen::Index s = pty.probe.rows();
  for (Eigen::Index p = 0; p < frame_count(op); ++p) {
    const ComplexImage frame = unflatten(z.data() + p * s * s, s, s);
    const ComplexImage back = pty.probe.conjugate() * idft2_unitary(frame);
    scatter_window(pty, back, p, acc);
  }
  return acc;
}

RealImage ata_diagonal(const MeasurementOperator& op) {
  const auto shape = image_shape(op);
  if (const auto* cdp = std::get_if<CdpOperator>(&op)) {
    RealImage diag = RealImage::Zero(shape[0], shape[1]);
    for (const auto& w : cdp->masks) diag += w.abs2();
    return diag;
  }
  const auto& pty = std::get<PtychoOperator>(op);
  ComplexImage acc = ComplexImage::Zero(shape[0], shape[1]);
  const ComplexImage probe_sq = pty.probe.abs2().cast<Complex>();
  for (Eigen::Index p = 0; p < frame_count(op); ++p) scatter_window(pty, probe_sq, p, acc);
  return acc.real();
}

std::vector<ComplexImage> octanary_masks(Eigen::Index rows, Eigen::Index cols, int count,
                                         std::uint64_t seed) {
  static const Complex candidates[8] = {
      {std::numbers::sqrt2 / 2, 0},  {-std::numbers::sqrt2 / 2, 0},
      {0, std::numbers::sqrt2 / 2},  {0, -std::numbers::sqrt2 / 2},
      {std::numbers::sqrt3, 0},      {-std::numbers::sqrt3, 0},
      {0, std::numbers::sqrt3},      {0, -std::numbers::sqrt3}};
  std::vector<ComplexImage> masks;
  masks.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    ComplexImage w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) {
        IndexStream rng(seed, static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(rows * cols) +
                                  static_cast<std::uint64_t>(i * cols + j));
        w(i, j) = candidates[rng.next_u64() >> 61];
      }
    masks.push_back(std::move(w));
  }
  return masks;
}

ComplexImage quadratic_phase_probe(Eigen::Index size, double radius, double curvature) {
  ComplexImage probe = ComplexImage::Zero(size, size);
  const double c = (static_cast<double>(size) - 1.0) / 2.0;
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j) {
      const double dr = static_cast<double>(i) - c;
      const double dc = static_cast<double>(j) - c;
      const double rho2 = dr * dr + dc * dc;
      if (rho2 <= radius * radius)
        probe(i, j) = std::polar(1.0, curvature * rho2 / (radius * radius));
    }
  return probe;
}

ComplexImage flat_disk_probe(Eigen::Index size, double radius) {
  return quadratic_phase_probe(size, radius, 0.0);
}

std::vector<std::array<Eigen::Index, 2>> scan_grid(Eigen::Index grid_rows, Eigen::Index grid_cols,
                                                   Eigen::Index stride) {
  if (grid_rows <= 0 || grid_cols <= 0 || stride <= 0)
    throw std::invalid_argument("scan_grid: dimensions and stride must be positive");
  std::vector<std::array<Eigen::Index, 2>> positions;
  positions.reserve(static_cast<std::size_t>(grid_rows * grid_cols));
  for (Eigen::Index i = 0; i < grid_rows; ++i)
    for (Eigen::Index j = 0; j < grid_cols; ++j) positions.push_back({i * stride, j * stride});
  return positions;
}

}  // namespace ppr
