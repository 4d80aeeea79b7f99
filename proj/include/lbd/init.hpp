#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbd/flow.hpp"
#include "lbd/ransac.hpp"
#include "lbd/scene.hpp"

namespace lbd {

enum class ForegroundChoice { Auto, MotionA, MotionB };

ForegroundChoice parse_foreground_choice(const std::string& name);  // auto | a | b

struct InitOptions {
    FlowConfig flow;
    RansacConfig ransac;
    ForegroundChoice fg_choice = ForegroundChoice::Auto;
    // When set, per-pair flow files "flow_%03d.flow" are read from this
    // directory instead of running the built-in estimator.
    std::optional<std::string> flow_dir;
};

// Assembles a first scene estimate from chained trajectories and per-pair
// motion labels. trajectories[slot] has frames+1 entries (slot 0 = motion A);
// label_maps[i] labels the pixels of frame i for pair (i, i+1). foreground_slot
// picks which slot is the occluder. Layers are averages of the label-guided,
// motion-compensated frames; the matte averages the background indicators.
Scene init_scene(const std::vector<ImageBuffer>& frames,
                 const std::vector<std::vector<AffineMotion>>& trajectories,
                 const std::vector<std::vector<MotionLabel>>& label_maps, int foreground_slot,
                 const CaptureTiming& timing);

// Full bootstrap: flow on every adjacent pair, two-motion RANSAC, slot
// association across pairs, chaining to the middle reference frame, role
// assignment (smaller labeled area = foreground unless overridden), then
// init_scene. Throws SingleMotionError if any pair degenerates.
Scene initialize_from_frames(const std::vector<ImageBuffer>& frames, const CaptureTiming& timing,
                             const InitOptions& options);

}  // namespace lbd
