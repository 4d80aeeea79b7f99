#include <cmath>
#include <limits>

#include "lbd/nelder_mead.hpp"
#include "lbd/solver.hpp"

namespace lbd {

namespace {

std::vector<double> to_params(const AffineMotion& m) {
    return {m.a11, m.a12, m.a21, m.a22, m.tx, m.ty};
}

AffineMotion from_params(const std::vector<double>& p) {
    AffineMotion m;
    m.a11 = p[0];
    m.a12 = p[1];
    m.a21 = p[2];
    m.a22 = p[3];
    m.tx = p[4];
    m.ty = p[5];
    return m;
}

// Constant-velocity continuation past the final frame, the same convention
// initialization uses for the trailing anchor.
AffineMotion continued_tail(const std::vector<AffineMotion>& traj) {
    const std::size_t n = traj.size() - 1;
    return traj[n - 1].compose(traj[n - 2].inverse()).compose(traj[n - 1]);
}

}  // namespace

void solve_motion(Scene& scene, const std::vector<ImageBuffer>& frames,
                  const SolverConfig& config, BlurModelKind kind) {
    scene.validate();
    if (frames.size() != static_cast<std::size_t>(scene.frames()))
        throw ShapeError("solve_motion: frame count mismatch");
    const SolverConfig cfg = config.resolved(scene.frames());
    const int n = scene.frames();

    // background trajectory first, then foreground, each block in frame order.
    // With n >= 2 frames the trailing anchor is not a free block: its only
    // data leverage is the tail of the last exposure, far too weak for 6 DOF,
    // so it follows the last step instead (matching the initializer). Blocks
    // that feed the continuation re-derive it inside their objective.
    for (std::vector<AffineMotion>* traj : {&scene.bg_motions, &scene.fg_motions}) {
        const bool tied = n >= 2;
        for (int j = 0; j < (tied ? n : n + 1); ++j) {
            // motion j anchors the exposures of frames j-1 and j
            std::vector<int> affected;
            if (j - 1 >= 0 && j - 1 < n) affected.push_back(j - 1);
            if (j < n) affected.push_back(j);
            const bool feeds_tail = tied && j >= n - 2;
            if (feeds_tail && affected.back() != n - 1) affected.push_back(n - 1);

            auto cost = [&](const std::vector<double>& p) {
                const AffineMotion m = from_params(p);
                if (std::abs(m.det()) <= 1e-6) return std::numeric_limits<double>::infinity();
                const AffineMotion saved = (*traj)[j];
                const AffineMotion saved_tail = (*traj)[n];
                (*traj)[j] = m;
                double v;
                try {
                    if (feeds_tail) (*traj)[n] = continued_tail(*traj);
                    v = data_term_value(scene, frames, cfg.lambda1, kind, affected);
                } catch (const InvalidMotionError&) {
                    v = std::numeric_limits<double>::infinity();
                }
                (*traj)[j] = saved;
                (*traj)[n] = saved_tail;
                return v;
            };

            // the bar to beat is the scene exactly as it stands; an incoming
            // tail off the continuation is never snapped without improvement
            const double current = data_term_value(scene, frames, cfg.lambda1, kind, affected);
            const std::vector<double> p0 = to_params((*traj)[j]);
            std::vector<std::vector<double>> simplex{p0};
            for (int d = 0; d < 6; ++d) {
                std::vector<double> v = p0;
                v[d] += d < 4 ? 0.01 : 0.5;
                simplex.push_back(std::move(v));
            }
            const NelderMeadResult best = nelder_mead_minimize(cost, simplex, cfg.nm_max_evals);
            if (best.value < current) {
                (*traj)[j] = from_params(best.best);
                if (feeds_tail) (*traj)[n] = continued_tail(*traj);
            }
        }
    }
}

}  // namespace lbd
