#pragma once

#include <filesystem>

#include "xrpipe/image.hpp"
#include "xrpipe/segmentation_types.hpp"

namespace xrp {

/// Loads a binary PGM (P5, 8- or 16-bit) and min-max normalizes intensities
/// to [0, 1]. 16-bit samples are scaled by 1/65535 before normalization.
/// A constant-valued image maps to all zeros.
Image load_image(const std::filesystem::path& path);

/// Loads a P5 file with plain maxval scaling (no min-max normalization).
/// Used to read back cached variant images exactly as they were written.
Image read_pgm(const std::filesystem::path& path);

/// Writes 8-bit P5; [0,1] is quantized with round-half-away-from-zero.
void save_pgm(const Image& img, const std::filesystem::path& path);

/// Masks serialize as P5 with values {0, 255}.
void save_mask(const Mask& mask, const std::filesystem::path& path);
Mask load_mask(const std::filesystem::path& path);

}  // namespace xrp
