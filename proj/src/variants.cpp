#include "xrpipe/variants.hpp"

#include <array>

#include "xrpipe/errors.hpp"
#include "xrpipe/filters.hpp"
#include "xrpipe/segmentation.hpp"

namespace xrp {

namespace {

constexpr std::array<const char*, kNumVariants> kVariantNames = {"normal", "bone_suppressed",
                                                                 "lung_cropped", "combined"};

VariantResult crop_to_lungs(const Image& img, const ImagingParams& params) {
  try {
    const Mask mask = segment_lung_fields(img, params.min_region_frac);
    const BoundingBox box = lung_bounding_box(mask, params.crop_border);
    return {crop(img, box), false};
  } catch (const SegmentationError&) {
    return {img, true};
  }
}

}  // namespace

const char* variant_name(Variant v) { return kVariantNames[static_cast<int>(v)]; }

std::optional<Variant> variant_from_name(std::string_view name) {
  for (int i = 0; i < kNumVariants; ++i)
    if (name == kVariantNames[i]) return static_cast<Variant>(i);
  return std::nullopt;
}

VariantResult materialize_variant(const Image& img, Variant v, const ImagingParams& params) {
  switch (v) {
    case Variant::normal:
      return {img, false};
    case Variant::bone_suppressed:
      return {suppress_bones(img, params.suppress_strength, params.suppress_sigma1,
                             params.suppress_sigma2),
              false};
    case Variant::lung_cropped:
      return crop_to_lungs(img, params);
    case Variant::combined: {
      const Image suppressed = suppress_bones(img, params.suppress_strength,
                                              params.suppress_sigma1, params.suppress_sigma2);
      return crop_to_lungs(suppressed, params);
    }
  }
  throw ConfigError("materialize_variant: unknown variant");
}

}  // namespace xrp
