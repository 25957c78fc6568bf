#pragma once

#include <optional>
#include <string_view>

#include "xrpipe/image.hpp"

namespace xrp {

/// The four image versions each model family trains on. `combined` is bone
/// suppression applied before lung cropping.
enum class Variant : int { normal = 0, bone_suppressed, lung_cropped, combined };

inline constexpr int kNumVariants = 4;

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view name);

/// Operator parameters shared by preprocessing; part of the cache key.
struct ImagingParams {
  double suppress_strength = 1.0;
  double suppress_sigma1 = 2.0;
  double suppress_sigma2 = 8.0;
  int crop_border = 100;
  double min_region_frac = 0.005;
};

struct VariantResult {
  Image image;
  bool segmentation_fallback = false;  // lung crop fell back to the full image
};

/// normal -> identity; bone_suppressed -> band attenuation; lung_cropped ->
/// segment + bounding box + crop; combined -> suppression then crop of the
/// suppressed image. Segmentation failure falls back to the uncropped input
/// and is reported through the flag, never as an error.
VariantResult materialize_variant(const Image& img, Variant v, const ImagingParams& params);

}  // namespace xrp
