#include "lbd/gradient.hpp"

namespace lbd {

void image_gradient(const ImageBuffer& img, ImageBuffer& gx, ImageBuffer& gy) {
    gx = ImageBuffer(img.width, img.height, img.channels);
    gy = ImageBuffer(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                if (x + 1 < img.width) gx.at(x, y, c) = img.at(x + 1, y, c) - img.at(x, y, c);
                if (y + 1 < img.height) gy.at(x, y, c) = img.at(x, y + 1, c) - img.at(x, y, c);
            }
}

ImageBuffer gradient_adjoint(const ImageBuffer& px, const ImageBuffer& py) {
    require_same_shape(px, py, "gradient_adjoint");
    ImageBuffer out(px.width, px.height, px.channels);
    const int w = px.width, h = px.height;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < px.channels; ++c) {
                double v = 0.0;
                if (x > 0) v += px.at(x - 1, y, c);
                if (x < w - 1) v -= px.at(x, y, c);
                if (y > 0) v += py.at(x, y - 1, c);
                if (y < h - 1) v -= py.at(x, y, c);
                out.at(x, y, c) = v;
            }
    return out;
}

}  // namespace lbd
