#include "lbd/kernels.hpp"

#include <numeric>
#include <string>

#include "lbd/blur.hpp"
#include "lbd/warp.hpp"

namespace lbd {

double PixelKernels::foreground_sum() const {
    return std::accumulate(foreground.data.begin(), foreground.data.end(), 0.0);
}

double PixelKernels::background_sum() const {
    return std::accumulate(background.data.begin(), background.data.end(), 0.0);
}

PixelKernels extract_pixel_kernels(const Scene& scene, int frame, int px, int py,
                                   BlurModelKind kind) {
    scene.validate();
    const int w = scene.width(), h = scene.height();
    if (px < 0 || px >= w || py < 0 || py >= h)
        throw IndexError("extract_pixel_kernels: pixel (" + std::to_string(px) + "," +
                         std::to_string(py) + ") out of range");
    const auto fg_m = exposure_motions(scene.fg_motions, frame, scene.timing);
    const auto bg_m = exposure_motions(scene.bg_motions, frame, scene.timing);
    const int m = scene.timing.samples;
    const double inv_m = 1.0 / m;

    PixelKernels out;
    out.foreground = ImageBuffer(w, h, 1);
    out.background = ImageBuffer(w, h, 1);
    double mean_alpha = 0.0;
    for (int k = 0; k < m; ++k) {
        double fx, fy;
        fg_m[k].apply(px, py, fx, fy);
        const BilinearTaps tf = bilinear_taps(fx, fy, w, h);
        double alpha_k = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double a = scene.alpha.at(tf.x[i], tf.y[i]);
            alpha_k += tf.w[i] * a;
            out.foreground.at(tf.x[i], tf.y[i]) += inv_m * tf.w[i] * (1.0 - a);
        }
        mean_alpha += inv_m * alpha_k;

        bg_m[k].apply(px, py, fx, fy);
        const BilinearTaps tb = bilinear_taps(fx, fy, w, h);
        const double bg_scale =
            kind == BlurModelKind::Proposed ? inv_m * alpha_k : inv_m;  // conventional: scaled below
        for (int i = 0; i < 4; ++i) out.background.at(tb.x[i], tb.y[i]) += bg_scale * tb.w[i];
    }
    if (kind == BlurModelKind::Conventional)
        for (double& v : out.background.data) v *= mean_alpha;
    return out;
}

}  // namespace lbd
