#include "ppr/denoise.hpp"

namespace ppr {

ComplexImage denoise(const DenoiserSpec& spec, const ComplexImage& v0) {
  if (spec.sigma < 0.0) throw std::invalid_argument("denoise: negative sigma");
  if (spec.kind == DenoiserKind::Identity || spec.sigma == 0.0) return v0;
  switch (spec.kind) {
    case DenoiserKind::TV:
      return tv_denoise(v0, spec.sigma, spec.gamma, spec.iters);
    case DenoiserKind::TGV2:
      return tgv2_denoise(v0, spec.sigma, spec.tgv_alpha_ratio, spec.gamma, spec.iters);
    case DenoiserKind::NLM: {
      const double h = spec.nlm_h_scale * spec.sigma * (2.0 * spec.patch_radius + 1.0);
      return nlm_denoise(v0, h, spec.patch_radius, spec.search_radius);
    }
    case DenoiserKind::BM3DLite:
      return bm3d_lite_denoise(v0, spec.sigma, spec.block, spec.group, spec.bm3d_search,
                               spec.threshold_mult, spec.bm3d_step);
    default:
      throw std::invalid_argument("denoise: unsupported kind");
  }
}

}  // namespace ppr
