#pragma once

#include <cstdint>
#include <vector>

namespace xrp {

/// Binary raster; true marks lung-field pixels. Dimensions match the source
/// image the mask was derived from.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  static Mask zeros(int w, int h) { return Mask{w, h, std::vector<uint8_t>(size_t(w) * h, 0)}; }

  bool at(int x, int y) const { return data[size_t(y) * width + x] != 0; }
  void set(int x, int y, bool v) { data[size_t(y) * width + x] = v ? 1 : 0; }
  size_t count() const {
    size_t n = 0;
    for (uint8_t v : data) n += (v != 0);
    return n;
  }
};

/// One 4-connected component, pixel indices row-major ascending.
struct Region {
  std::vector<int32_t> pixels;

  int area() const { return static_cast<int>(pixels.size()); }
};

}  // namespace xrp
