#pragma once

#include <vector>

#include "lbd/scene.hpp"
#include "lbd/warp.hpp"

namespace lbd {

// Precomputed bilinear taps for one affine warp; apply/adjoint share the
// exact same weights, so the adjoint is the true matrix transpose.
struct WarpPlan {
    int width = 0, height = 0;
    std::vector<BilinearTaps> taps;

    WarpPlan() = default;
    WarpPlan(const AffineMotion& motion, int w, int h);

    void apply(const ImageBuffer& src, ImageBuffer& out) const;
    void apply_add(const ImageBuffer& src, ImageBuffer& out, double scale) const;
    void adjoint_add(const ImageBuffer& r, ImageBuffer& out, double scale) const;
};

// The M within-exposure warps of `frame` along a per-frame trajectory
// (traj.size() == frames+1; the entry past the end anchors the last exposure).
std::vector<AffineMotion> exposure_motions(const std::vector<AffineMotion>& traj, int frame,
                                           const CaptureTiming& timing);

// Matte composite: alpha==1 shows the background.
ImageBuffer composite(const ImageBuffer& foreground, const ImageBuffer& background,
                      const ImageBuffer& alpha);

// Smallest sample count that keeps successive sample positions within about
// one pixel, judged at the image corners; clamped to [2, 30].
int auto_sample_count(const std::vector<AffineMotion>& fg_motions,
                      const std::vector<AffineMotion>& bg_motions, const CaptureTiming& timing,
                      int width, int height);

// Linear map (L0, L1) -> blurred frames with alpha and motions held fixed.
// apply_* is the unclamped model; render_blurred_frame clamps at the end.
class LatentBlurOperator {
public:
    LatentBlurOperator(const Scene& scene, BlurModelKind kind);

    int frames() const { return static_cast<int>(fg_plans_.size()); }
    int samples() const { return samples_; }
    BlurModelKind kind() const { return kind_; }

    ImageBuffer apply_frame(int frame, const ImageBuffer& background,
                            const ImageBuffer& foreground) const;
    // Accumulates the transposed action of frame `frame` into the layer images.
    void adjoint_frame_add(int frame, const ImageBuffer& residual, ImageBuffer& into_background,
                           ImageBuffer& into_foreground) const;

    // Warped mattes of frame/sample, i.e. the occlusion state at each instant.
    const ImageBuffer& warped_alpha(int frame, int k) const { return warped_alpha_[frame][k]; }
    const WarpPlan& fg_plan(int frame, int k) const { return fg_plans_[frame][k]; }
    const WarpPlan& bg_plan(int frame, int k) const { return bg_plans_[frame][k]; }

private:
    BlurModelKind kind_;
    int samples_;
    ImageBuffer one_minus_alpha_;
    std::vector<std::vector<WarpPlan>> fg_plans_, bg_plans_;  // [frame][k]
    std::vector<std::vector<ImageBuffer>> warped_alpha_;      // [frame][k]
    std::vector<ImageBuffer> avg_warped_alpha_;               // conventional: K1 A per frame
};

// Linear map alpha -> frames with layers and motions fixed. Per-sample form:
//   (K_A a)_i = mean_k[ (W0_k L0) * (W1_k a) - W1_k(a * L1) ]
// and the conventional form replaces the per-sample products with products
// of the averaged kernels. The matching constant term B_A = B - K1 L1
// satisfies B_A - K_A(alpha) == B - model(scene) for the unclamped model.
class AlphaBlurOperator {
public:
    AlphaBlurOperator(const Scene& scene, BlurModelKind kind = BlurModelKind::Proposed);

    int frames() const { return static_cast<int>(fg_plans_.size()); }
    BlurModelKind kind() const { return kind_; }
    ImageBuffer apply_frame(int frame, const ImageBuffer& alpha) const;
    ImageBuffer adjoint_frame(int frame, const ImageBuffer& residual) const;
    // B_A for the given observation: observed - mean_k W1_k L1.
    ImageBuffer constant_term(int frame, const ImageBuffer& observed) const;

private:
    BlurModelKind kind_;
    ImageBuffer foreground_;
    std::vector<std::vector<WarpPlan>> fg_plans_;
    std::vector<std::vector<ImageBuffer>> warped_bg_;  // W0_k L0 per frame/sample
    std::vector<ImageBuffer> mean_warped_bg_;          // K0 L0 per frame (conventional)
    std::vector<ImageBuffer> mean_warped_fg_;          // K1 L1 per frame
};

// One observed frame under either model, clamped to [0,1]. frame is 0-based.
ImageBuffer render_blurred_frame(const Scene& scene, int frame, BlurModelKind kind);

}  // namespace lbd
