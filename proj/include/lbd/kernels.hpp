#pragma once

#include "lbd/scene.hpp"

namespace lbd {

// Per-pixel blur kernels: the row of the blur operator for one observed
// pixel, split into the weights placed on foreground and background layer
// pixels. Both maps live on the layer grid; entries untouched by the pixel
// stay 0. foreground_sum + background_sum == 1 for any valid scene.
struct PixelKernels {
    ImageBuffer foreground;
    ImageBuffer background;

    double foreground_sum() const;
    double background_sum() const;
};

PixelKernels extract_pixel_kernels(const Scene& scene, int frame, int px, int py,
                                   BlurModelKind kind);

}  // namespace lbd
