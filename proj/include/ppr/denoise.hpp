#pragma once

#include "ppr/types.hpp"

namespace ppr {

enum class DenoiserKind { Identity, TV, TGV2, NLM, BM3DLite };

struct DenoiserSpec {
  DenoiserKind kind = DenoiserKind::Identity;
  double sigma = 0.0;  // denoising strength, lambda / r in the outer solver

  // TV / TGV2
  double gamma = 1.0;  // splitting penalty (TV); dual/primal step ratio (TGV2)
  int iters = 60;
  double tgv_alpha_ratio = 2.0;  // alpha1 / alpha0

  // NLM
  int patch_radius = 1;
  int search_radius = 5;
  double nlm_h_scale = 0.55;  // bandwidth h = scale * sigma * (2 patch_radius + 1)

  // BM3DLite
  int block = 8;
  int group = 16;
  int bm3d_search = 12;
  double threshold_mult = 2.7;
  int bm3d_step = 4;  // reference-block stride
};

// Dispatch on kind. Identity and sigma = 0 return v0 unchanged.
ComplexImage denoise(const DenoiserSpec& spec, const ComplexImage& v0);

// Isotropic total variation with forward differences and periodic boundary:
// sum_j sqrt(|Dx v(j)|^2 + |Dy v(j)|^2).
double tv_isotropic(const ComplexImage& v);

// ADMM for sigma TV(v) + 1/2 |v - v0|^2 with FFT solve of the v-step.
ComplexImage tv_denoise(const ComplexImage& v0, double sigma, double gamma, int iters);

// Second-order TGV by a Chambolle-Pock primal-dual scheme;
// alpha1 = sigma, alpha0 = sigma / alpha_ratio.
ComplexImage tgv2_denoise(const ComplexImage& v0, double sigma, double alpha_ratio, double gamma,
                          int iters);

// Nonlocal means: convex combination over the search window with weights from
// Gaussian-weighted patch distances (bandwidth h). Exact identity for
// h < 1e-12. Border patches clamp indices.
ComplexImage nlm_denoise(const ComplexImage& v0, double h, int patch_radius, int search_radius);

// First-stage block-matching filter: group similar blocks (complex distances),
// 2-D DCT per block + 1-D Haar across the group, hard threshold at
// threshold_mult * sigma (the DC coefficient is exempt), aggregate with
// weights 1 / (1 + retained).
ComplexImage bm3d_lite_denoise(const ComplexImage& v0, double sigma, int block, int group,
                               int search_radius, double threshold_mult, int step);

}  // namespace ppr
