#include "xrpipe/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xrpipe/errors.hpp"

namespace xrp {

namespace {
constexpr double kDegToRad = 0.017453292519943295;
}

double bilinear_at(const Image& img, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double wx = x - x0;
  const double wy = y - y0;
  auto clampx = [&](int v) { return std::clamp(v, 0, img.width - 1); };
  auto clampy = [&](int v) { return std::clamp(v, 0, img.height - 1); };
  const double v00 = img.px(clampx(x0), clampy(y0));
  const double v10 = img.px(clampx(x0 + 1), clampy(y0));
  const double v01 = img.px(clampx(x0), clampy(y0 + 1));
  const double v11 = img.px(clampx(x0 + 1), clampy(y0 + 1));
  const double top = (1.0 - wx) * v00 + wx * v10;
  const double bot = (1.0 - wx) * v01 + wx * v11;
  return (1.0 - wy) * top + wy * bot;
}

Image resize_bilinear(const Image& img, int w, int h) {
  if (w < 1 || h < 1) throw DataError("resize: target dimensions must be >= 1");
  Image out = Image::zeros(w, h);
  const double sx = static_cast<double>(img.width) / w;
  const double sy = static_cast<double>(img.height) / h;
  for (int y = 0; y < h; ++y) {
    const double src_y = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < w; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      out.px(x, y) = bilinear_at(img, src_x, src_y);
    }
  }
  return out;
}

Image crop(const Image& img, const BoundingBox& box) {
  if (!box.valid_for(img.width, img.height))
    throw DataError("crop: box (" + std::to_string(box.x0) + "," + std::to_string(box.y0) + "," +
                    std::to_string(box.x1) + "," + std::to_string(box.y1) + ") outside image");
  Image out = Image::zeros(box.width(), box.height());
  for (int y = box.y0; y < box.y1; ++y)
    for (int x = box.x0; x < box.x1; ++x) out.px(x - box.x0, y - box.y0) = img.px(x, y);
  return out;
}

Image horizontal_flip(const Image& img) {
  Image out = Image::zeros(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) out.px(x, y) = img.px(img.width - 1 - x, y);
  return out;
}

Image rotate(const Image& img, double angle_deg) {
  const double c = std::cos(angle_deg * kDegToRad);
  const double s = std::sin(angle_deg * kDegToRad);
  const double cx = (img.width - 1) * 0.5;
  const double cy = (img.height - 1) * 0.5;
  Image out = Image::zeros(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      const double src_x = c * dx + s * dy + cx;
      const double src_y = -s * dx + c * dy + cy;
      const int x0 = static_cast<int>(std::floor(src_x));
      const int y0 = static_cast<int>(std::floor(src_y));
      const double wx = src_x - x0;
      const double wy = src_y - y0;
      auto sample = [&](int xx, int yy) -> double {
        if (xx < 0 || xx >= img.width || yy < 0 || yy >= img.height) return 0.0;
        return img.px(xx, yy);
      };
      const double top = (1.0 - wx) * sample(x0, y0) + wx * sample(x0 + 1, y0);
      const double bot = (1.0 - wx) * sample(x0, y0 + 1) + wx * sample(x0 + 1, y0 + 1);
      out.px(x, y) = (1.0 - wy) * top + wy * bot;
    }
  }
  return out;
}

std::array<Image, 5> five_crop(const Image& img, int size) {
  if (size < 1 || size > img.width || size > img.height)
    throw DataError("five_crop: size " + std::to_string(size) + " exceeds image " +
                    std::to_string(img.width) + "x" + std::to_string(img.height));
  const int rx = img.width - size;
  const int ry = img.height - size;
  const int cxx = rx / 2;
  const int cyy = ry / 2;
  auto box = [&](int x0, int y0) { return BoundingBox{x0, y0, x0 + size, y0 + size}; };
  return {crop(img, box(0, 0)),  crop(img, box(rx, 0)), crop(img, box(0, ry)),
          crop(img, box(rx, ry)), crop(img, box(cxx, cyy))};
}

}  // namespace xrp
