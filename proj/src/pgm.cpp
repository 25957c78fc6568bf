#include "xrpipe/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "xrpipe/errors.hpp"
#include "xrpipe/util.hpp"

namespace xrp {

namespace {

struct RawPgm {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::vector<uint32_t> samples;
};

int next_header_int(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comments between header tokens.
  while (true) {
    const int c = in.peek();
    if (c == EOF) throw DataError("pgm: truncated header: " + path);
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else {
      break;
    }
  }
  int v = 0;
  if (!(in >> v)) throw DataError("pgm: malformed header: " + path);
  return v;
}

RawPgm read_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("pgm: unreadable file: " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5')
    throw DataError("pgm: unsupported format (need binary P5): " + path.string());
  RawPgm pgm;
  pgm.width = next_header_int(in, path.string());
  pgm.height = next_header_int(in, path.string());
  pgm.maxval = next_header_int(in, path.string());
  if (pgm.width < 1 || pgm.height < 1)
    throw DataError("pgm: zero-area image: " + path.string());
  if (pgm.maxval < 1 || pgm.maxval > 65535)
    throw DataError("pgm: unsupported bit depth (maxval " + std::to_string(pgm.maxval) +
                    "): " + path.string());
  in.get();  // single whitespace byte before the raster
  const size_t n = size_t(pgm.width) * pgm.height;
  const bool wide = pgm.maxval > 255;
  std::vector<unsigned char> buf(n * (wide ? 2 : 1));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<size_t>(in.gcount()) != buf.size())
    throw DataError("pgm: truncated raster data: " + path.string());
  pgm.samples.resize(n);
  if (wide) {
    for (size_t i = 0; i < n; ++i)
      pgm.samples[i] = (uint32_t(buf[2 * i]) << 8) | buf[2 * i + 1];  // big-endian per P5
  } else {
    for (size_t i = 0; i < n; ++i) pgm.samples[i] = buf[i];
  }
  return pgm;
}

Image scale_raw(const RawPgm& pgm) {
  Image img = Image::zeros(pgm.width, pgm.height);
  const double scale = pgm.maxval > 255 ? 1.0 / 65535.0 : 1.0 / 255.0;
  for (size_t i = 0; i < pgm.samples.size(); ++i) img.data[i] = pgm.samples[i] * scale;
  return img;
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  Image img = scale_raw(read_raw(path));
  const auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi > lo) {
    const double inv = 1.0 / (hi - lo);
    for (double& v : img.data) v = (v - lo) * inv;
  } else {
    std::fill(img.data.begin(), img.data.end(), 0.0);
  }
  return img;
}

Image read_pgm(const std::filesystem::path& path) { return scale_raw(read_raw(path)); }

void save_pgm(const Image& img, const std::filesystem::path& path) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.size());
  for (double v : img.data) {
    const double q = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
    out.push_back(static_cast<char>(static_cast<unsigned char>(q)));
  }
  write_file_atomic(path, out);
}

void save_mask(const Mask& mask, const std::filesystem::path& path) {
  std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
  out.reserve(out.size() + mask.data.size());
  for (uint8_t v : mask.data) out.push_back(static_cast<char>(v ? 255 : 0));
  write_file_atomic(path, out);
}

Mask load_mask(const std::filesystem::path& path) {
  const RawPgm pgm = read_raw(path);
  Mask mask = Mask::zeros(pgm.width, pgm.height);
  for (size_t i = 0; i < pgm.samples.size(); ++i)
    mask.data[i] = pgm.samples[i] * 2 > static_cast<uint32_t>(pgm.maxval) ? 1 : 0;
  return mask;
}

}  // namespace xrp
