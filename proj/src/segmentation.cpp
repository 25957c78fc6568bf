#include "xrpipe/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "xrpipe/errors.hpp"

namespace xrp {

std::vector<Region> connected_components(const Mask& mask) {
  const int w = mask.width, h = mask.height;
  std::vector<uint8_t> seen(size_t(w) * h, 0);
  std::vector<Region> regions;
  std::vector<int32_t> stack;
  for (int start = 0; start < w * h; ++start) {
    if (!mask.data[start] || seen[start]) continue;
    Region region;
    stack.clear();
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const int32_t p = stack.back();
      stack.pop_back();
      region.pixels.push_back(p);
      const int x = p % w, y = p / w;
      const int32_t nbrs[4] = {p - 1, p + 1, p - w, p + w};
      const bool ok[4] = {x > 0, x < w - 1, y > 0, y < h - 1};
      for (int k = 0; k < 4; ++k) {
        if (!ok[k]) continue;
        const int32_t q = nbrs[k];
        if (mask.data[q] && !seen[q]) {
          seen[q] = 1;
          stack.push_back(q);
        }
      }
    }
    std::sort(region.pixels.begin(), region.pixels.end());
    regions.push_back(std::move(region));
  }
  std::stable_sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
    if (a.area() != b.area()) return a.area() > b.area();
    return a.pixels.front() < b.pixels.front();
  });
  return regions;
}

double otsu_threshold(const Image& img) {
  const auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
  if (!(*hi_it > *lo_it)) throw SegmentationError("otsu: constant image has no threshold");
  constexpr int kBins = 256;
  std::vector<int64_t> hist(kBins, 0);
  for (double v : img.data) {
    int bin = static_cast<int>(v * kBins);
    hist[std::clamp(bin, 0, kBins - 1)]++;
  }
  const int64_t total = static_cast<int64_t>(img.size());
  double sum_all = 0.0;
  for (int i = 0; i < kBins; ++i) sum_all += static_cast<double>(i) * hist[i];
  double sum_b = 0.0;
  int64_t w_b = 0;
  double best_var = -1.0;
  int best_k = 0;
  for (int k = 0; k < kBins - 1; ++k) {
    w_b += hist[k];
    if (w_b == 0) continue;
    const int64_t w_f = total - w_b;
    if (w_f == 0) break;
    sum_b += static_cast<double>(k) * hist[k];
    const double mu_b = sum_b / w_b;
    const double mu_f = (sum_all - sum_b) / w_f;
    const double between = static_cast<double>(w_b) * w_f * (mu_b - mu_f) * (mu_b - mu_f);
    if (between > best_var) {
      best_var = between;
      best_k = k;
    }
  }
  // Pixels in bins <= best_k fall below; report the bin's upper edge.
  return (best_k + 1) / static_cast<double>(kBins);
}

namespace {

Mask erode3x3(const Mask& mask) {
  Mask out = Mask::zeros(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || xx >= mask.width || yy < 0 || yy >= mask.height || !mask.at(xx, yy)) {
            all = false;
            break;
          }
        }
      }
      out.set(x, y, all);
    }
  }
  return out;
}

Mask dilate3x3(const Mask& mask) {
  Mask out = Mask::zeros(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      bool any = false;
      for (int dy = -1; dy <= 1 && !any; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx >= 0 && xx < mask.width && yy >= 0 && yy < mask.height && mask.at(xx, yy)) {
            any = true;
            break;
          }
        }
      }
      out.set(x, y, any);
    }
  }
  return out;
}

}  // namespace

Mask opening3x3(const Mask& mask) { return dilate3x3(erode3x3(mask)); }

Mask segment_lung_fields(const Image& img, double min_region_frac) {
  const double thr = otsu_threshold(img);
  Mask mask = Mask::zeros(img.width, img.height);
  for (size_t i = 0; i < img.size(); ++i) mask.data[i] = img.data[i] < thr ? 1 : 0;
  mask = opening3x3(mask);
  const auto regions = connected_components(mask);
  const double min_area = min_region_frac * static_cast<double>(img.size());
  Mask out = Mask::zeros(img.width, img.height);
  bool any = false;
  for (const Region& r : regions) {
    if (r.area() < min_area) break;  // sorted descending
    for (int32_t p : r.pixels) out.data[p] = 1;
    any = true;
  }
  if (!any) throw SegmentationError("lung segmentation produced an empty mask");
  return out;
}

BoundingBox lung_bounding_box(const Mask& mask, int border) {
  const auto regions = connected_components(mask);
  if (regions.empty()) throw SegmentationError("lung_bounding_box: empty mask");
  int x0 = mask.width, y0 = mask.height, x1 = 0, y1 = 0;
  const size_t take = std::min<size_t>(2, regions.size());
  for (size_t i = 0; i < take; ++i) {
    for (int32_t p : regions[i].pixels) {
      const int x = p % mask.width, y = p / mask.width;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x + 1);
      y1 = std::max(y1, y + 1);
    }
  }
  return BoundingBox{std::max(0, x0 - border), std::max(0, y0 - border),
                     std::min(mask.width, x1 + border), std::min(mask.height, y1 + border)};
}

}  // namespace xrp
