#pragma once

#include "lbd/image.hpp"

namespace lbd {

// Forward differences with a zero (Neumann) last row/column:
//   gx(x,y) = img(x+1,y) - img(x,y), gx(w-1,y) = 0, same pattern for gy.
void image_gradient(const ImageBuffer& img, ImageBuffer& gx, ImageBuffer& gy);

// Exact transpose of image_gradient: negative divergence of (px, py).
// <G img, (px,py)> == <img, gradient_adjoint(px,py)> to roundoff.
ImageBuffer gradient_adjoint(const ImageBuffer& px, const ImageBuffer& py);

}  // namespace lbd
