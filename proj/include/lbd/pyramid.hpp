#pragma once

#include <vector>

#include "lbd/motion.hpp"
#include "lbd/scene.hpp"

namespace lbd {

struct LevelDims {
    int width = 0;
    int height = 0;
};

// Finest-first level sizes: each next level is ceil(prev * scale), generated
// while the current level's smaller side is still >= min_size. max_levels > 0
// keeps only that many of the finest levels.
std::vector<LevelDims> pyramid_levels(int width, int height, double scale, int min_size,
                                      int max_levels = 0);

// Conjugates a motion into a resized coordinate grid: x' = sx*x, y' = sy*y.
AffineMotion rescale_motion(const AffineMotion& m, double sx, double sy);

// Resizes all scene images and rescales both trajectories to the new grid.
Scene rescale_scene(const Scene& scene, int new_w, int new_h);

}  // namespace lbd
