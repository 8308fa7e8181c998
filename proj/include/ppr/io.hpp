#pragma once

#include "ppr/noise.hpp"
#include "ppr/pnp.hpp"
#include "ppr/types.hpp"

#include <filesystem>
#include <string>

namespace ppr {

// Complex images on disk: raw little-endian f64 (re, im) pairs in row-major
// order plus a JSON sidecar {"height", "width", "dtype": "c128"} at
// <path>.json.
void write_c128(const std::filesystem::path& path, const ComplexImage& img);
ComplexImage read_c128(const std::filesystem::path& path);

// Phaseless data: raw little-endian f64 vector plus sidecar
// {"m", "kind", "level", "seed"}.
void write_phaseless(const std::filesystem::path& path, const PhaselessData& data);
PhaselessData read_phaseless(const std::filesystem::path& path);

// 8-bit grayscale ingestion (PNG or PGM), values scaled to [0, 1].
RealImage read_grayscale(const std::filesystem::path& path);

// 8-bit grayscale previews; values are min/max normalized.
void write_png_gray(const std::filesystem::path& path, const RealImage& img);
void write_pgm_gray(const std::filesystem::path& path, const RealImage& img);

// CSV columns: iter, rel_err, snr_db, fidelity, pnp_residual.
void write_history_csv(const std::filesystem::path& path, const RunHistory& history);

}  // namespace ppr
