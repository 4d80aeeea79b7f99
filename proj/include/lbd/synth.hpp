#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbd/blur.hpp"
#include "lbd/scene.hpp"

namespace lbd {

// Procedural texture description for one layer.
struct TextureSpec {
    std::string type = "constant";  // constant | checkerboard | noise | file
    double value = 0.5;             // constant
    int period = 8;                 // checkerboard
    double low = 0.1, high = 0.9;   // checkerboard
    std::uint64_t seed = 0;         // noise
    int smooth = 1;                 // noise: 3x3 box blur passes
    std::string path;               // file
};

// Foreground silhouette; alpha is 0 inside the shape, 1 outside.
struct MaskSpec {
    std::string type = "disk";  // disk | box | fence | file
    double cx = 0, cy = 0, radius = 8;            // disk
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;        // box
    int period = 16, bar_width = 8, phase = 0;    // fence: vertical bars
    std::string path;                             // file
};

// Declarative scene: everything needed to synthesize a blurred sequence with
// known ground truth. Loaded from JSON (unknown keys rejected).
struct SceneScript {
    int width = 64, height = 64, channels = 1;
    int frames = 3;
    TextureSpec foreground, background;
    MaskSpec mask;
    // velocity in on-screen pixels/frame when procedural; explicit lists must
    // carry frames+1 motions.
    std::vector<AffineMotion> fg_motions, bg_motions;
    CaptureTiming timing;        // timing.samples == 0 requests the automatic count
    double noise_sigma = 0.0;    // additive gaussian after rendering
    std::uint64_t seed = 1;

    static SceneScript from_json_text(const std::string& text);
    static SceneScript load(const std::string& path);
};

ImageBuffer make_texture(const TextureSpec& spec, int w, int h, int channels);
ImageBuffer make_mask(const MaskSpec& spec, int w, int h);

// Ground-truth scene for the script (resolves the automatic sample count).
Scene build_scene(const SceneScript& script);

struct RenderedSequence {
    std::vector<ImageBuffer> frames;
    Scene truth;
};

RenderedSequence render_sequence(const SceneScript& script, BlurModelKind kind);

// Small dense matrices used to cross-check the matrix-free operators.
struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<double> m;  // row-major

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), m(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return m[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return m[static_cast<std::size_t>(r) * cols + c]; }
};

// Materializes the latent-layer operator of one frame by pushing basis images
// through it: columns [0, n) are background pixels, [n, 2n) foreground.
// Refuses scenes with more than 4096 pixels.
DenseMatrix dense_operator(const Scene& scene, int frame, BlurModelKind kind);

// Same for the matte operator (columns are alpha pixels).
DenseMatrix dense_alpha_operator(const Scene& scene, int frame,
                                 BlurModelKind kind = BlurModelKind::Proposed);

// Max |proposed - conventional| over all frames for three degenerate scenes
// where the two models provably coincide.
struct SpecialCaseReport {
    double static_background = 0.0;
    double static_foreground = 0.0;
    double homogeneous_background = 0.0;
};

SpecialCaseReport check_special_cases(std::uint64_t seed);

// Smooth random scene for tests: noise layers, soft matte, gentle affines.
Scene make_test_scene(std::uint64_t seed, int w, int h, int channels, int frames, int samples);

}  // namespace lbd
