#pragma once

#include <string>
#include <vector>

#include "lbd/blur.hpp"
#include "lbd/scene.hpp"

namespace lbd {

// Weights and iteration limits for the alternating solver. Negative weight
// fields mean "derive from the frame count" (done by resolved()):
//   lambda1 = 2500 / frames, lambda2 = 0.055 * lambda1, lambda3 = lambda1 / 20000,
//   tau = sigma_a.
struct SolverConfig {
    double lambda1 = -1.0;  // data fidelity
    double lambda2 = -1.0;  // matte total variation
    double lambda3 = -1.0;  // matte binary pressure
    double sigma_d = 10.0;  // dual step
    double sigma_a = 0.0125;  // primal step
    double tau = -1.0;        // primal proximal weight divisor
    double hyper_exponent = 0.8;
    std::vector<double> beta_schedule = {1, 2, 4, 8, 16, 32, 64, 128, 256};
    int cg_max_iter = 25;
    double cg_rel_tol = 1e-4;
    int pd_iterations = 20;
    int nm_max_evals = 100;
    int inner_iterations = 3;

    // Fills the derived fields and validates everything; throws ConfigError.
    SolverConfig resolved(int frames) const;
};

struct EnergyBreakdown {
    double data_term = 0.0;    // lambda1 * sum_i ||grad B_i - grad model_i||^2
    double layer_prior = 0.0;  // sum |grad L|^q over both layers (unit weight)
    double alpha_tv = 0.0;     // lambda2 * isotropic TV of the matte
    double alpha_binary = 0.0; // lambda3 * sum A(1-A)
    double total = 0.0;
};

// Full objective for the current scene against the observed frames.
// Uses the unclamped linear model of the given kind.
EnergyBreakdown objective(const Scene& scene, const std::vector<ImageBuffer>& frames,
                          const SolverConfig& config,
                          BlurModelKind kind = BlurModelKind::Proposed);

// Just lambda1 * sum over `subset` of the gradient-domain data misfit.
// An empty subset means all frames.
double data_term_value(const Scene& scene, const std::vector<ImageBuffer>& frames,
                       double lambda1, BlurModelKind kind, const std::vector<int>& subset = {});

// sum |grad L|^q over both layers.
double layer_prior_value(const Scene& scene, double hyper_exponent);

// Single-frame unclamped model, built directly from the scene (no cached
// plans). render_blurred_frame is this plus the final clamp.
ImageBuffer model_frame_unclamped(const Scene& scene, int frame, BlurModelKind kind);

// Half-quadratic splitting update of both layers (matte and motions fixed).
// Guarded: never increases lambda1*data + layer_prior by more than 1e-6.
void solve_latent(Scene& scene, const std::vector<ImageBuffer>& frames,
                  const SolverConfig& config, BlurModelKind kind = BlurModelKind::Proposed);

// Primal-dual update of the matte (layers and motions fixed). Throws
// ConfigError when the binary weight makes the primal system indefinite.
void solve_alpha(Scene& scene, const std::vector<ImageBuffer>& frames,
                 const SolverConfig& config, BlurModelKind kind = BlurModelKind::Proposed);

// Derivative-free refinement of the per-frame motions, one simplex run per
// (layer, motion) block; keeps a block's update only when it strictly
// decreases the data term. For scenes with >= 2 frames the trailing anchor
// is not optimized: it tracks the constant-velocity continuation of the
// last step, the same convention initialization uses.
void solve_motion(Scene& scene, const std::vector<ImageBuffer>& frames,
                  const SolverConfig& config, BlurModelKind kind = BlurModelKind::Proposed);

struct TraceEntry {
    std::string step;  // "latent" | "alpha" | "motion"
    EnergyBreakdown energy;
};

// inner_iterations rounds of latent -> alpha -> motion. Each step is
// reverted if it raised the total objective by more than 1e-6, so the
// returned trace is non-increasing.
std::vector<TraceEntry> alternate(Scene& scene, const std::vector<ImageBuffer>& frames,
                                  const SolverConfig& config,
                                  BlurModelKind kind = BlurModelKind::Proposed);

}  // namespace lbd
