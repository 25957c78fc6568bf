#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace xrp {

/// 2-D grayscale raster with row-major float intensities in [0, 1].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  static Image zeros(int w, int h) { return Image{w, h, std::vector<double>(size_t(w) * h, 0.0)}; }

  double px(int x, int y) const { return data[size_t(y) * width + x]; }
  double& px(int x, int y) { return data[size_t(y) * width + x]; }
  size_t size() const { return data.size(); }
  bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

/// Pixel rectangle, inclusive-exclusive: [x0, x1) x [y0, y1).
struct BoundingBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool valid_for(int w, int h) const {
    return 0 <= x0 && x0 < x1 && x1 <= w && 0 <= y0 && y0 < y1 && y1 <= h;
  }
  bool contains(const BoundingBox& o) const {
    return x0 <= o.x0 && y0 <= o.y0 && x1 >= o.x1 && y1 >= o.y1;
  }
};

/// Edge-clamped bilinear sample at continuous coordinates (pixel centers at
/// integer positions).
double bilinear_at(const Image& img, double x, double y);

/// Bilinear resize with half-pixel-centered sampling. Identity dimensions
/// reproduce the input bit-exactly.
Image resize_bilinear(const Image& img, int w, int h);

/// Copies the box region; no resampling.
Image crop(const Image& img, const BoundingBox& box);

/// Reverses column order per row.
Image horizontal_flip(const Image& img);

/// Rotation about the image center (counterclockwise for positive angles),
/// bilinear interpolation, out-of-domain samples read as 0. Output
/// dimensions unchanged; angle 0 is an exact identity.
Image rotate(const Image& img, double angle_deg);

/// The four corner crops and the center crop, each size x size, in the
/// order TL, TR, BL, BR, C. Center offsets use floor((dim - size) / 2).
std::array<Image, 5> five_crop(const Image& img, int size);

}  // namespace xrp
