#include "xrpipe/augment.hpp"

#include <cmath>

#include "xrpipe/errors.hpp"

namespace xrp {

void AugConfig::validate() const {
  if (!(area_min > 0.0 && area_min <= area_max && area_max <= 1.0))
    throw ConfigError("augment: need 0 < area_min <= area_max <= 1");
  if (!(aspect_min > 0.0 && aspect_min <= aspect_max))
    throw ConfigError("augment: need 0 < aspect_min <= aspect_max");
  if (max_rotation < 0.0 || max_rotation > 45.0)
    throw ConfigError("augment: max_rotation must lie in [0, 45]");
  if (flip_prob < 0.0 || flip_prob > 1.0)
    throw ConfigError("augment: flip_prob must lie in [0, 1]");
  if (train_size < 1 || test_size < 1 || crop_size < 1)
    throw ConfigError("augment: sizes must be >= 1");
  if (crop_size > test_size) throw ConfigError("augment: crop_size must be <= test_size");
}

PatchGeom sample_patch(Rng& rng, const AugConfig& cfg, int img_w, int img_h) {
  const double full_area = static_cast<double>(img_w) * img_h;
  PatchGeom geom;
  for (int attempt = 0; attempt < 10; ++attempt) {
    const double a = rng.uniform(cfg.area_min, cfg.area_max);
    const double r = std::exp(rng.uniform(std::log(cfg.aspect_min), std::log(cfg.aspect_max)));
    const int w = static_cast<int>(std::lround(std::sqrt(a * full_area * r)));
    const int h = static_cast<int>(std::lround(std::sqrt(a * full_area / r)));
    if (w < 1 || w > img_w || h < 1 || h > img_h) continue;
    geom.w = w;
    geom.h = h;
    geom.x0 = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(img_w - w + 1)));
    geom.y0 = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(img_h - h + 1)));
    geom.drawn_area = a;
    geom.drawn_aspect = r;
    return geom;
  }
  geom.w = img_w;
  geom.h = img_h;
  geom.fallback = true;
  return geom;
}

AugDraw sample_augment(Rng& rng, const AugConfig& cfg, int img_w, int img_h) {
  AugDraw draw;
  draw.patch = sample_patch(rng, cfg, img_w, img_h);
  draw.flip = rng.bernoulli(cfg.flip_prob);
  draw.angle = rng.uniform(-cfg.max_rotation, cfg.max_rotation);
  return draw;
}

Image apply_augment(const Image& img, const AugDraw& draw, const AugConfig& cfg) {
  const PatchGeom& p = draw.patch;
  Image out = crop(img, BoundingBox{p.x0, p.y0, p.x0 + p.w, p.y0 + p.h});
  out = resize_bilinear(out, cfg.train_size, cfg.train_size);
  if (draw.flip) out = horizontal_flip(out);
  if (draw.angle != 0.0) out = rotate(out, draw.angle);
  return out;
}

Image augment(const Image& img, Rng& rng, const AugConfig& cfg) {
  return apply_augment(img, sample_augment(rng, cfg, img.width, img.height), cfg);
}

std::array<Image, 5> test_transform(const Image& img, const AugConfig& cfg) {
  if (cfg.crop_size > cfg.test_size)
    throw ConfigError("test_transform: crop_size exceeds test_size");
  return five_crop(resize_bilinear(img, cfg.test_size, cfg.test_size), cfg.crop_size);
}

}  // namespace xrp
