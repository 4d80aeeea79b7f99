#include "lbd/solver.hpp"

namespace lbd {

std::vector<TraceEntry> alternate(Scene& scene, const std::vector<ImageBuffer>& frames,
                                  const SolverConfig& config, BlurModelKind kind) {
    scene.validate();
    const SolverConfig cfg = config.resolved(scene.frames());
    std::vector<TraceEntry> trace;
    double current = objective(scene, frames, cfg, kind).total;

    auto guarded = [&](const char* name, auto&& step) {
        const Scene snapshot = scene;
        step();
        EnergyBreakdown e = objective(scene, frames, cfg, kind);
        if (e.total > current + 1e-6) {
            scene = snapshot;  // the step overshot; keep the previous iterate
            e = objective(scene, frames, cfg, kind);
        }
        current = e.total;
        trace.push_back({name, e});
    };

    for (int it = 0; it < cfg.inner_iterations; ++it) {
        guarded("latent", [&] { solve_latent(scene, frames, cfg, kind); });
        guarded("alpha", [&] { solve_alpha(scene, frames, cfg, kind); });
        guarded("motion", [&] { solve_motion(scene, frames, cfg, kind); });
    }
    return trace;
}

}  // namespace lbd
