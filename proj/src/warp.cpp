#include "lbd/warp.hpp"

#include <algorithm>
#include <cmath>

namespace lbd {

BilinearTaps bilinear_taps(double fx, double fy, int width, int height) {
    fx = std::clamp(fx, 0.0, static_cast<double>(width - 1));
    fy = std::clamp(fy, 0.0, static_cast<double>(height - 1));
    int x0 = static_cast<int>(std::floor(fx));
    int y0 = static_cast<int>(std::floor(fy));
    if (x0 > width - 2) x0 = std::max(width - 2, 0);
    if (y0 > height - 2) y0 = std::max(height - 2, 0);
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const double wx = fx - x0;
    const double wy = fy - y0;
    BilinearTaps t;
    t.x = {x0, x1, x0, x1};
    t.y = {y0, y0, y1, y1};
    t.w = {(1.0 - wx) * (1.0 - wy), wx * (1.0 - wy), (1.0 - wx) * wy, wx * wy};
    return t;
}

ImageBuffer warp_affine(const ImageBuffer& src, const AffineMotion& motion) {
    ImageBuffer out(src.width, src.height, src.channels);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            double fx, fy;
            motion.apply(x, y, fx, fy);
            const BilinearTaps t = bilinear_taps(fx, fy, src.width, src.height);
            for (int c = 0; c < src.channels; ++c) {
                double v = 0.0;
                for (int i = 0; i < 4; ++i) v += t.w[i] * src.at(t.x[i], t.y[i], c);
                out.at(x, y, c) = v;
            }
        }
    }
    return out;
}

ImageBuffer warp_adjoint(const ImageBuffer& r, const AffineMotion& motion) {
    ImageBuffer out(r.width, r.height, r.channels);
    for (int y = 0; y < r.height; ++y) {
        for (int x = 0; x < r.width; ++x) {
            double fx, fy;
            motion.apply(x, y, fx, fy);
            const BilinearTaps t = bilinear_taps(fx, fy, r.width, r.height);
            for (int c = 0; c < r.channels; ++c) {
                const double v = r.at(x, y, c);
                for (int i = 0; i < 4; ++i) out.at(t.x[i], t.y[i], c) += t.w[i] * v;
            }
        }
    }
    return out;
}

}  // namespace lbd
