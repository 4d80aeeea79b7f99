#pragma once

#include <cstdint>
#include <vector>

#include "lbd/flow.hpp"
#include "lbd/motion.hpp"

namespace lbd {

struct RansacConfig {
    int iterations = 500;            // per motion
    double inlier_threshold = 1.0;   // px
    double min_inlier_fraction = 0.15;  // of all pixels, for the second motion
    std::uint64_t seed = 0;
};

enum class MotionLabel : std::uint8_t { A = 0, B = 1, Outlier = 2 };

struct TwoMotionFit {
    AffineMotion motion_a, motion_b;       // frame -> next frame step maps
    std::vector<MotionLabel> labels;       // per pixel, row-major
    double inlier_fraction_a = 0.0, inlier_fraction_b = 0.0;
};

// Only one coherent affine motion is present in the flow field. Carries the
// motion that was found so callers can degrade gracefully.
struct SingleMotionError : std::runtime_error {
    AffineMotion motion;
    explicit SingleMotionError(const AffineMotion& m)
        : std::runtime_error("flow field supports only a single affine motion"), motion(m) {}
};

// Sequential two-model RANSAC over p -> p + flow(p): fits the dominant
// affine, removes its inliers, fits the second, then relabels every pixel by
// its best fitting motion. Least-squares refits on the inlier sets.
TwoMotionFit ransac_two_affine(const FlowField& flow, const RansacConfig& config);

}  // namespace lbd
