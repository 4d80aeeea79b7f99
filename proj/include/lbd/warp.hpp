#pragma once

#include <array>

#include "lbd/image.hpp"
#include "lbd/motion.hpp"

namespace lbd {

// Bilinear footprint of one destination pixel: up to four source taps.
// Coordinates are clamped to the image rectangle, so weights always sum to 1.
struct BilinearTaps {
    std::array<int, 4> x;
    std::array<int, 4> y;
    std::array<double, 4> w;
};

BilinearTaps bilinear_taps(double fx, double fy, int width, int height);

// out(p) = src(motion(p)), bilinear, clamp-to-edge. Rows of the implied
// matrix sum to exactly 1, so warping a constant image is the identity.
ImageBuffer warp_affine(const ImageBuffer& src, const AffineMotion& motion);

// Exact transpose of warp_affine with the same motion: scatters r back
// through the same taps. <warp(x), r> == <x, warp_adjoint(r)> to roundoff.
ImageBuffer warp_adjoint(const ImageBuffer& r, const AffineMotion& motion);

}  // namespace lbd
