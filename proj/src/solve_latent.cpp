#include "lbd/cg.hpp"
#include "lbd/gradient.hpp"
#include "lbd/prox.hpp"
#include "lbd/solver.hpp"

namespace lbd {

namespace {

// Both layers travel through CG as one vertically stacked image:
// rows [0,h) background, rows [h,2h) foreground.
ImageBuffer stack2(const ImageBuffer& bg, const ImageBuffer& fg) {
    ImageBuffer s(bg.width, bg.height * 2, bg.channels);
    std::copy(bg.data.begin(), bg.data.end(), s.data.begin());
    std::copy(fg.data.begin(), fg.data.end(), s.data.begin() + bg.data.size());
    return s;
}

void unstack2(const ImageBuffer& s, ImageBuffer& bg, ImageBuffer& fg) {
    const int h = s.height / 2;
    if (bg.width != s.width || bg.height != h || bg.channels != s.channels)
        bg = ImageBuffer(s.width, h, s.channels);
    if (fg.width != s.width || fg.height != h || fg.channels != s.channels)
        fg = ImageBuffer(s.width, h, s.channels);
    std::copy(s.data.begin(), s.data.begin() + bg.data.size(), bg.data.begin());
    std::copy(s.data.begin() + bg.data.size(), s.data.end(), fg.data.begin());
}

// G^T G x for one layer image.
ImageBuffer laplacian_like(const ImageBuffer& x) {
    ImageBuffer gx, gy;
    image_gradient(x, gx, gy);
    return gradient_adjoint(gx, gy);
}

}  // namespace

void solve_latent(Scene& scene, const std::vector<ImageBuffer>& frames,
                  const SolverConfig& config, BlurModelKind kind) {
    scene.validate();
    if (frames.size() != static_cast<std::size_t>(scene.frames()))
        throw ShapeError("solve_latent: frame count mismatch");
    const SolverConfig cfg = config.resolved(scene.frames());
    const LatentBlurOperator op(scene, kind);
    const int w = scene.width(), h = scene.height(), ch = scene.channels();
    const int n_frames = scene.frames();

    // 2*lambda1 * K^T G^T G B, fixed across the schedule
    ImageBuffer rhs_bg(w, h, ch), rhs_fg(w, h, ch);
    for (int i = 0; i < n_frames; ++i) {
        ImageBuffer gx, gy;
        image_gradient(frames[i], gx, gy);
        op.adjoint_frame_add(i, gradient_adjoint(gx, gy), rhs_bg, rhs_fg);
    }
    for (double& v : rhs_bg.data) v *= 2.0 * cfg.lambda1;
    for (double& v : rhs_fg.data) v *= 2.0 * cfg.lambda1;
    const ImageBuffer rhs_data = stack2(rhs_bg, rhs_fg);

    auto normal_op = [&](double beta) {
        return [&, beta](const ImageBuffer& x) {
            ImageBuffer bg, fg;
            unstack2(x, bg, fg);
            ImageBuffer acc_bg(w, h, ch), acc_fg(w, h, ch);
            for (int i = 0; i < n_frames; ++i) {
                const ImageBuffer u = op.apply_frame(i, bg, fg);
                ImageBuffer gx, gy;
                image_gradient(u, gx, gy);
                op.adjoint_frame_add(i, gradient_adjoint(gx, gy), acc_bg, acc_fg);
            }
            for (double& v : acc_bg.data) v *= 2.0 * cfg.lambda1;
            for (double& v : acc_fg.data) v *= 2.0 * cfg.lambda1;
            axpy(beta, laplacian_like(bg), acc_bg);
            axpy(beta, laplacian_like(fg), acc_fg);
            return stack2(acc_bg, acc_fg);
        };
    };

    // A zero beta disables the prior for that pass (pure data least squares),
    // so the acceptance guard then watches the data term alone.
    auto guard_energy = [&](double beta) {
        double e = data_term_value(scene, frames, cfg.lambda1, kind);
        if (beta > 0.0) e += layer_prior_value(scene, cfg.hyper_exponent);
        return e;
    };

    for (double beta : cfg.beta_schedule) {
        const ImageBuffer keep_bg = scene.background, keep_fg = scene.foreground;
        const double before = guard_energy(beta);

        ImageBuffer rhs = rhs_data;
        if (beta > 0.0) {
            // w-step: shrink the layer gradients through the tabulated prox
            const ProxLut prox(beta, cfg.hyper_exponent);
            ImageBuffer rb, rf;
            unstack2(rhs, rb, rf);
            ImageBuffer gx, gy;
            image_gradient(scene.background, gx, gy);
            for (double& v : gx.data) v = prox(v);
            for (double& v : gy.data) v = prox(v);
            axpy(beta, gradient_adjoint(gx, gy), rb);
            image_gradient(scene.foreground, gx, gy);
            for (double& v : gx.data) v = prox(v);
            for (double& v : gy.data) v = prox(v);
            axpy(beta, gradient_adjoint(gx, gy), rf);
            rhs = stack2(rb, rf);
        }

        // L-step: normal equations by warm-started CG, then clamp
        ImageBuffer x = stack2(scene.background, scene.foreground);
        conjugate_gradient(normal_op(beta), rhs, x, cfg.cg_max_iter, cfg.cg_rel_tol);
        unstack2(x, scene.background, scene.foreground);
        scene.background.clamp01();
        scene.foreground.clamp01();

        if (guard_energy(beta) > before + 1e-6) {
            scene.background = keep_bg;
            scene.foreground = keep_fg;
        }
    }
}

}  // namespace lbd
