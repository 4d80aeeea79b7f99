#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbd/init.hpp"
#include "lbd/solver.hpp"

namespace lbd {

// Everything the deblur pipeline needs, loadable from JSON. Unknown keys are
// rejected so typos fail loudly.
struct RunConfig {
    SolverConfig solver;
    double pyramid_scale = 0.8;
    int min_level_size = 32;
    int max_levels = 0;  // 0 = full chain
    double duty_cycle = 0.5;
    int samples = 0;  // 0 = automatic per level
    BlurModelKind model = BlurModelKind::Proposed;
    std::uint64_t seed = 1;
    ForegroundChoice fg_choice = ForegroundChoice::Auto;
    RansacConfig ransac;
    FlowConfig flow;

    static RunConfig from_json_text(const std::string& text);
    static RunConfig load(const std::string& path);
};

struct TraceRow {
    std::string step;  // "level0.iter1.latent" and friends
    EnergyBreakdown energy;
};

struct DeblurResult {
    Scene scene;  // final full-resolution estimate
    Scene init;   // the initialization, for before/after comparisons
    std::vector<TraceRow> trace;
};

/// Blind deblurring: initialize (or adopt gt_init), then alternate over a
// coarse-to-fine pyramid. flow_dir substitutes precomputed flow files for
// the built-in estimator during initialization.
DeblurResult deblur_run(const std::vector<ImageBuffer>& frames, const RunConfig& config,
                        const std::optional<Scene>& gt_init = {},
                        const std::optional<std::string>& flow_dir = {});

// Quality of a reconstruction against ground truth. Layer PSNRs are
// computed after aligning the estimate into the truth's reference gauge
// (middle-frame conjugation) and only over pixels the observed frames can
// actually constrain. Motion errors compare gauge-invariant per-frame steps.
struct Metrics {
    double background_psnr = 0.0;
    double foreground_psnr = 0.0;
    double alpha_mae = 0.0;
    double bg_translation_error = 0.0;  // mean px over steps
    double fg_translation_error = 0.0;
    double bg_linear_error = 0.0;  // mean Frobenius over steps
    double fg_linear_error = 0.0;
};

Metrics compute_metrics(const Scene& estimate, const Scene& truth);

// Coverage masks (1 = pixel constrained by at least one observation) on the
// truth gauge; first = background layer, second = foreground layer.
std::pair<ImageBuffer, ImageBuffer> recoverable_masks(const Scene& truth);

// PSNR in dB over mask==1 pixels, capped at 99, rounded to 0.01.
double masked_psnr(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer& mask);

// Scene motion bundle <-> motions.json.
std::string motions_to_json(const Scene& scene);
void motions_from_json(const std::string& text, Scene& scene);

std::string metrics_to_json(const Metrics& final_metrics, const std::optional<Metrics>& init);
std::string trace_to_csv(const std::vector<TraceRow>& trace);

}  // namespace lbd
