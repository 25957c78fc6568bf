#pragma once

#include "xrpipe/image.hpp"
#include "xrpipe/segmentation_types.hpp"

namespace xrp {

/// 4-connected components of the true pixels, sorted by area descending
/// (ties broken by smallest pixel index). The regions partition the true
/// set: pairwise disjoint, union equals the mask.
std::vector<Region> connected_components(const Mask& mask);

/// Otsu threshold over a 256-bin histogram of the intensities. Throws
/// SegmentationError if the image is constant.
double otsu_threshold(const Image& img);

/// 3x3 morphological opening (erosion then dilation, square element,
/// out-of-image treated as false).
Mask opening3x3(const Mask& mask);

/// Reference lung-field segmenter standing in for a learned model behind
/// the same interface: global Otsu threshold selecting the dark side,
/// one pass of 3x3 opening, then components smaller than min_region_frac
/// of the image area are dropped. Throws SegmentationError when nothing
/// survives.
Mask segment_lung_fields(const Image& img, double min_region_frac = 0.005);

/// Tight box over the union of the two largest regions (the single region
/// if only one exists), expanded by `border` pixels on every side and
/// clamped to the mask bounds. Throws SegmentationError on an empty mask;
/// callers fall back to the full-image box.
BoundingBox lung_bounding_box(const Mask& mask, int border = 100);

}  // namespace xrp
