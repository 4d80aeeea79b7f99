#include <cmath>

#include "lbd/cg.hpp"
#include "lbd/gradient.hpp"
#include "lbd/solver.hpp"

namespace lbd {

void solve_alpha(Scene& scene, const std::vector<ImageBuffer>& frames,
                 const SolverConfig& config, BlurModelKind kind) {
    scene.validate();
    if (frames.size() != static_cast<std::size_t>(scene.frames()))
        throw ShapeError("solve_alpha: frame count mismatch");
    const SolverConfig cfg = config.resolved(scene.frames());
    const AlphaBlurOperator op(scene, kind);
    const int w = scene.width(), h = scene.height();
    const int n_frames = scene.frames();

    // 2*lambda1 * K_A^T G^T G b_A, fixed over the iterations
    ImageBuffer rhs_data(w, h, 1);
    for (int i = 0; i < n_frames; ++i) {
        ImageBuffer gx, gy;
        image_gradient(op.constant_term(i, frames[i]), gx, gy);
        axpy(2.0 * cfg.lambda1, op.adjoint_frame(i, gradient_adjoint(gx, gy)), rhs_data);
    }

    const double prox_weight = cfg.lambda2 / cfg.tau;
    auto system = [&](const ImageBuffer& a) {
        ImageBuffer acc(w, h, 1);
        for (int i = 0; i < n_frames; ++i) {
            ImageBuffer gx, gy;
            image_gradient(op.apply_frame(i, a), gx, gy);
            axpy(2.0 * cfg.lambda1, op.adjoint_frame(i, gradient_adjoint(gx, gy)), acc);
        }
        for (std::size_t i = 0; i < acc.data.size(); ++i)
            acc.data[i] += (prox_weight - 2.0 * cfg.lambda3) * a.data[i];
        return acc;
    };

    ImageBuffer dual_x(w, h, 1), dual_y(w, h, 1);
    ImageBuffer a_bar = scene.alpha;
    for (int it = 0; it < cfg.pd_iterations; ++it) {
        // dual ascent on the TV term, projected onto unit discs
        ImageBuffer gx, gy;
        image_gradient(a_bar, gx, gy);
        for (std::size_t i = 0; i < dual_x.data.size(); ++i) {
            double dx = dual_x.data[i] + cfg.sigma_d * gx.data[i];
            double dy = dual_y.data[i] + cfg.sigma_d * gy.data[i];
            const double mag = std::hypot(dx, dy);
            if (mag > 1.0) {
                dx /= mag;
                dy /= mag;
            }
            dual_x.data[i] = dx;
            dual_y.data[i] = dy;
        }

        // primal: proximal least squares around a_m = alpha - (sigma_a/..) div
        const ImageBuffer div = gradient_adjoint(dual_x, dual_y);
        ImageBuffer rhs = rhs_data;
        for (std::size_t i = 0; i < rhs.data.size(); ++i)
            rhs.data[i] += prox_weight * (scene.alpha.data[i] - cfg.sigma_a * div.data[i]) -
                           cfg.lambda3;

        const ImageBuffer a_old = scene.alpha;
        ImageBuffer a_new = scene.alpha;
        try {
            conjugate_gradient(system, rhs, a_new, cfg.cg_max_iter, cfg.cg_rel_tol);
        } catch (const IndefiniteSystemError&) {
            throw ConfigError(
                "solve_alpha: primal system is indefinite; lower lambda3 (or raise lambda2)");
        }
        a_new.clamp01();
        scene.alpha = a_new;

        // extrapolate for the next dual step
        a_bar = a_new;
        for (std::size_t i = 0; i < a_bar.data.size(); ++i)
            a_bar.data[i] = 2.0 * a_new.data[i] - a_old.data[i];
    }
}

}  // namespace lbd
