#pragma once

#include "ppr/types.hpp"

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

namespace ppr {

// Coded diffraction pattern operator: frame k is F(w_k o u) with mask w_k.
struct CdpOperator {
  std::vector<ComplexImage> masks;  // K masks, each with the image shape
};

// Ptychography operator: frame p is F(probe o window_p(u)) for an s x s
// window of u at scan offset p. Windows wrap periodically by default;
// with wrap off, scan positions are clamped so every frame stays in range.
struct PtychoOperator {
  ComplexImage probe;  // s x s illumination
  std::vector<std::array<Eigen::Index, 2>> positions;
  Eigen::Index image_rows = 0;
  Eigen::Index image_cols = 0;
  bool periodic_wrap = true;
};

using MeasurementOperator = std::variant<CdpOperator, PtychoOperator>;

CdpOperator make_cdp_operator(std::vector<ComplexImage> masks);
PtychoOperator make_ptycho_operator(ComplexImage probe,
                                    std::vector<std::array<Eigen::Index, 2>> positions,
                                    Eigen::Index image_rows, Eigen::Index image_cols,
                                    bool periodic_wrap = true);

Eigen::Index output_size(const MeasurementOperator& op);
std::array<Eigen::Index, 2> image_shape(const MeasurementOperator& op);
Eigen::Index frame_count(const MeasurementOperator& op);

// Linear map A, its adjoint, and diag(A*A) (which is diagonal for both kinds).
SpectrumVector forward(const MeasurementOperator& op, const ComplexImage& u);
ComplexImage adjoint(const MeasurementOperator& op, const SpectrumVector& z);
RealImage ata_diagonal(const MeasurementOperator& op);

// Octanary masks: entries drawn i.i.d. uniform over
// {+-sqrt(2)/2, +-i sqrt(2)/2, +-sqrt(3), +-i sqrt(3)}.
std::vector<ComplexImage> octanary_masks(Eigen::Index rows, Eigen::Index cols, int count,
                                         std::uint64_t seed);

// Synthetic probes standing in for a zone-plate illumination: a circular
// aperture with quadratic phase, or a flat disk.
ComplexImage quadratic_phase_probe(Eigen::Index size, double radius, double curvature);
ComplexImage flat_disk_probe(Eigen::Index size, double radius);

// Scan grid of rows x cols positions with a fixed stride, starting at (0,0).
std::vector<std::array<Eigen::Index, 2>> scan_grid(Eigen::Index grid_rows, Eigen::Index grid_cols,
                                                   Eigen::Index stride);

}  // namespace ppr
