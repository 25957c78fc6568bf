#pragma once

#include "xrpipe/image.hpp"

namespace xrp {

/// Separable Gaussian blur, kernel radius ceil(4*sigma), replicated edges
/// (constants pass through unchanged).
Image gaussian_blur(const Image& img, double sigma);

/// Reference bone-shadow attenuator standing in for a published suppression
/// algorithm behind the same interface: subtracts `strength` times the
/// band-pass component G(sigma1) - G(sigma2) of the image and clamps to
/// [0, 1]. Strength 0 is an exact identity.
Image suppress_bones(const Image& img, double strength, double sigma1 = 2.0, double sigma2 = 8.0);

}  // namespace xrp
