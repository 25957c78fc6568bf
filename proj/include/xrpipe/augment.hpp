#pragma once

#include <array>

#include "xrpipe/image.hpp"
#include "xrpipe/rng.hpp"

namespace xrp {

/// Training/test transform parameters. The desk-scale defaults keep the
/// pipeline fast on CPU; the full-scale values (448/480) are plain config
/// settings.
struct AugConfig {
  double area_min = 0.8;
  double area_max = 1.0;
  double aspect_min = 3.0 / 4.0;
  double aspect_max = 4.0 / 3.0;
  double flip_prob = 0.5;
  double max_rotation = 7.0;  // degrees
  int train_size = 64;
  int test_size = 64;
  int crop_size = 56;

  void validate() const;
};

/// Geometry of one sampled patch. `fallback` marks the full-image fallback
/// after 10 rejected attempts (or an image too small to admit any patch).
struct PatchGeom {
  int w = 0, h = 0, x0 = 0, y0 = 0;
  double drawn_area = 1.0;
  double drawn_aspect = 1.0;
  bool fallback = false;
};

/// Area fraction ~ U[area_min, area_max], aspect log-uniform on
/// [aspect_min, aspect_max]; w = round(sqrt(a*W*H*r)), h = round(sqrt(a*W*H/r)),
/// position uniform over valid offsets. Attempts whose rounded patch does
/// not fit are redrawn up to 10 times, then the full image is used.
PatchGeom sample_patch(Rng& rng, const AugConfig& cfg, int img_w, int img_h);

/// The full per-sample draw: patch, flip coin, rotation angle
/// ~ U[-max_rotation, +max_rotation]. Draw order is fixed.
struct AugDraw {
  PatchGeom patch;
  bool flip = false;
  double angle = 0.0;
};

AugDraw sample_augment(Rng& rng, const AugConfig& cfg, int img_w, int img_h);

/// patch crop -> resize to train_size^2 -> optional flip -> rotate.
Image apply_augment(const Image& img, const AugDraw& draw, const AugConfig& cfg);

/// Stochastic training transform; equals apply_augment(sample_augment()).
Image augment(const Image& img, Rng& rng, const AugConfig& cfg);

/// Deterministic test-time transform: resize to test_size^2, then five-crop
/// at crop_size (TL, TR, BL, BR, C).
std::array<Image, 5> test_transform(const Image& img, const AugConfig& cfg);

}  // namespace xrp
