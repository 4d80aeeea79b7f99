#include <cmath>

#include "lbd/gradient.hpp"
#include "lbd/solver.hpp"

namespace lbd {

SolverConfig SolverConfig::resolved(int frames) const {
    if (frames < 1) throw ConfigError("SolverConfig: frame count must be >= 1");
    SolverConfig c = *this;
    if (c.lambda1 < 0.0) c.lambda1 = 2500.0 / frames;
    if (c.lambda2 < 0.0) c.lambda2 = 0.055 * c.lambda1;
    if (c.lambda3 < 0.0) c.lambda3 = c.lambda1 / 20000.0;
    if (c.tau < 0.0) c.tau = c.sigma_a;
    if (c.lambda1 <= 0.0) throw ConfigError("SolverConfig: lambda1 must be positive");
    if (c.lambda2 <= 0.0) throw ConfigError("SolverConfig: lambda2 must be positive");
    if (c.lambda3 < 0.0) throw ConfigError("SolverConfig: lambda3 must be >= 0");
    if (c.sigma_d <= 0.0 || c.sigma_a <= 0.0 || c.tau <= 0.0)
        throw ConfigError("SolverConfig: step sizes must be positive");
    if (c.hyper_exponent <= 0.0 || c.hyper_exponent >= 1.0)
        throw ConfigError("SolverConfig: hyper_exponent must lie in (0,1)");
    if (c.beta_schedule.empty()) throw ConfigError("SolverConfig: empty beta schedule");
    double prev = -1.0;
    for (double b : c.beta_schedule) {
        // beta = 0 is allowed (disables the prior for that pass)
        if (!(b >= 0.0) || b <= prev)
            throw ConfigError("SolverConfig: beta schedule must be non-negative and increasing");
        prev = b;
    }
    if (c.cg_max_iter < 1 || c.pd_iterations < 1 || c.nm_max_evals < 1 ||
        c.inner_iterations < 1)
        throw ConfigError("SolverConfig: iteration counts must be >= 1");
    if (c.cg_rel_tol <= 0.0) throw ConfigError("SolverConfig: cg_rel_tol must be positive");
    return c;
}

ImageBuffer model_frame_unclamped(const Scene& scene, int frame, BlurModelKind kind) {
    const auto fg_m = exposure_motions(scene.fg_motions, frame, scene.timing);
    const auto bg_m = exposure_motions(scene.bg_motions, frame, scene.timing);
    const int w = scene.width(), h = scene.height(), ch = scene.channels();
    const int m = scene.timing.samples;
    const double inv_m = 1.0 / m;

    ImageBuffer fg_visible = scene.foreground;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double t = 1.0 - scene.alpha.at(x, y);
            for (int c = 0; c < ch; ++c) fg_visible.at(x, y, c) *= t;
        }

    ImageBuffer out(w, h, ch);
    if (kind == BlurModelKind::Proposed) {
        for (int k = 0; k < m; ++k) {
            const ImageBuffer wfg = warp_affine(fg_visible, fg_m[k]);
            const ImageBuffer wa = warp_affine(scene.alpha, fg_m[k]);
            const ImageBuffer wbg = warp_affine(scene.background, bg_m[k]);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const double a = wa.at(x, y);
                    for (int c = 0; c < ch; ++c)
                        out.at(x, y, c) += inv_m * (wfg.at(x, y, c) + a * wbg.at(x, y, c));
                }
        }
    } else {
        ImageBuffer kfg(w, h, ch), kbg(w, h, ch), ka(w, h, 1);
        for (int k = 0; k < m; ++k) {
            axpy(inv_m, warp_affine(fg_visible, fg_m[k]), kfg);
            axpy(inv_m, warp_affine(scene.alpha, fg_m[k]), ka);
            axpy(inv_m, warp_affine(scene.background, bg_m[k]), kbg);
        }
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double a = ka.at(x, y);
                for (int c = 0; c < ch; ++c)
                    out.at(x, y, c) = kfg.at(x, y, c) + a * kbg.at(x, y, c);
            }
    }
    return out;
}

namespace {

double gradient_sq_misfit(const ImageBuffer& observed, const ImageBuffer& model) {
    ImageBuffer gox, goy, gmx, gmy;
    image_gradient(observed, gox, goy);
    image_gradient(model, gmx, gmy);
    double s = 0.0;
    for (std::size_t i = 0; i < gox.data.size(); ++i) {
        const double dx = gox.data[i] - gmx.data[i];
        const double dy = goy.data[i] - gmy.data[i];
        s += dx * dx + dy * dy;
    }
    return s;
}

}  // namespace

double data_term_value(const Scene& scene, const std::vector<ImageBuffer>& frames,
                       double lambda1, BlurModelKind kind, const std::vector<int>& subset) {
    if (frames.size() != static_cast<std::size_t>(scene.frames()))
        throw ShapeError("data_term_value: frame count mismatch");
    double s = 0.0;
    if (subset.empty()) {
        for (int i = 0; i < scene.frames(); ++i)
            s += gradient_sq_misfit(frames[i], model_frame_unclamped(scene, i, kind));
    } else {
        for (int i : subset) {
            if (i < 0 || i >= scene.frames()) continue;
            s += gradient_sq_misfit(frames[i], model_frame_unclamped(scene, i, kind));
        }
    }
    return lambda1 * s;
}

double layer_prior_value(const Scene& scene, double hyper_exponent) {
    double s = 0.0;
    ImageBuffer gx, gy;
    for (const ImageBuffer* layer : {&scene.background, &scene.foreground}) {
        image_gradient(*layer, gx, gy);
        for (std::size_t i = 0; i < gx.data.size(); ++i)
            s += std::pow(std::abs(gx.data[i]), hyper_exponent) +
                 std::pow(std::abs(gy.data[i]), hyper_exponent);
    }
    return s;
}

EnergyBreakdown objective(const Scene& scene, const std::vector<ImageBuffer>& frames,
                          const SolverConfig& config, BlurModelKind kind) {
    scene.validate();
    const SolverConfig cfg = config.resolved(scene.frames());
    EnergyBreakdown e;
    e.data_term = data_term_value(scene, frames, cfg.lambda1, kind);
    e.layer_prior = layer_prior_value(scene, cfg.hyper_exponent);

    ImageBuffer gx, gy;
    image_gradient(scene.alpha, gx, gy);
    for (std::size_t i = 0; i < gx.data.size(); ++i)
        e.alpha_tv += std::hypot(gx.data[i], gy.data[i]);
    e.alpha_tv *= cfg.lambda2;

    for (double a : scene.alpha.data) e.alpha_binary += a * (1.0 - a);
    e.alpha_binary *= cfg.lambda3;

    e.total = e.data_term + e.layer_prior + e.alpha_tv + e.alpha_binary;
    return e;
}

}  // namespace lbd
