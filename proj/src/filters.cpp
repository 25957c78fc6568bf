#include "xrpipe/filters.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "xrpipe/errors.hpp"

namespace xrp {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[i + radius] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

Image gaussian_blur(const Image& img, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian_blur: sigma must be positive");
  const std::vector<double> k = gaussian_kernel(sigma);
  const int radius = (static_cast<int>(k.size()) - 1) / 2;
  const int w = img.width, h = img.height;

  Image tmp = Image::zeros(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int xx = std::clamp(x + i, 0, w - 1);
        acc += k[i + radius] * img.px(xx, y);
      }
      tmp.px(x, y) = acc;
    }
  }
  Image out = Image::zeros(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int yy = std::clamp(y + i, 0, h - 1);
        acc += k[i + radius] * tmp.px(x, yy);
      }
      out.px(x, y) = acc;
    }
  }
  return out;
}

Image suppress_bones(const Image& img, double strength, double sigma1, double sigma2) {
  if (strength < 0.0 || strength > 1.0)
    throw ConfigError("suppress_bones: strength must lie in [0, 1]");
  if (strength == 0.0) return img;
  const Image fine = gaussian_blur(img, sigma1);
  const Image coarse = gaussian_blur(img, sigma2);
  Image out = Image::zeros(img.width, img.height);
  for (size_t i = 0; i < img.size(); ++i) {
    const double band = fine.data[i] - coarse.data[i];
    out.data[i] = std::clamp(img.data[i] - strength * band, 0.0, 1.0);
  }
  return out;
}

}  // namespace xrp
