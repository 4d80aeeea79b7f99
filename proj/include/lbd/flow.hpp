#pragma once

#include <string>

#include "lbd/image.hpp"

namespace lbd {

// Dense displacement field with the convention a(p) ~ b(p + flow(p)).
struct FlowField {
    ImageBuffer u;  // x displacement, single channel
    ImageBuffer v;  // y displacement
};

struct FlowConfig {
    int window_radius = 3;     // 7x7 window
    int warp_iterations = 3;   // refinement passes per level
    double pyramid_scale = 0.8;
    int min_level_size = 16;
    // smallest structure-tensor eigenvalue that still gets an update; windows
    // below it keep the coarser level's estimate instead of amplifying noise
    double min_eigenvalue = 1e-4;
};

// Pyramidal Lucas-Kanade on the luma of the two images.
FlowField compute_flow(const ImageBuffer& a, const ImageBuffer& b, const FlowConfig& config = {});

// Raw flow file: u32 LE width, u32 LE height, then the u plane and the v
// plane as row-major float32 LE.
FlowField load_flow(const std::string& path);
void save_flow(const FlowField& flow, const std::string& path);

}  // namespace lbd
