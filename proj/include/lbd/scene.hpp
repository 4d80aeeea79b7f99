#pragma once

#include <string>
#include <vector>

#include "lbd/image.hpp"
#include "lbd/motion.hpp"

namespace lbd {

enum class BlurModelKind {
    Proposed,      // per-sample occlusion inside the exposure
    Conventional,  // per-layer averaged kernels applied to premultiplied layers
};

BlurModelKind parse_model_kind(const std::string& name);  // "proposed" | "conventional"
const char* model_kind_name(BlurModelKind kind);

// Two-layer world state: foreground layer, background layer, matte, and one
// motion trajectory per layer. alpha = 1 where the background shows through,
// 0 where the foreground occludes it. Motion vectors carry frames+1 entries;
// the last one extrapolates past the final frame for its exposure.
struct Scene {
    ImageBuffer foreground;  // L1
    ImageBuffer background;  // L0
    ImageBuffer alpha;       // single channel
    std::vector<AffineMotion> fg_motions;
    std::vector<AffineMotion> bg_motions;
    CaptureTiming timing;

    int width() const { return alpha.width; }
    int height() const { return alpha.height; }
    int channels() const { return foreground.channels; }
    int frames() const { return timing.frames; }

    // Shape/size coherence; throws ShapeError or ConfigError.
    void validate() const;
};

}  // namespace lbd
