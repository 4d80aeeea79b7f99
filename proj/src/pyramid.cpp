#include "lbd/pyramid.hpp"

#include <cmath>

#include "lbd/blur.hpp"

namespace lbd {

std::vector<LevelDims> pyramid_levels(int width, int height, double scale, int min_size,
                                      int max_levels) {
    if (width < 1 || height < 1) throw ShapeError("pyramid_levels: empty image");
    if (scale <= 0.0 || scale >= 1.0) throw ConfigError("pyramid_levels: scale must be in (0,1)");
    if (min_size < 2) throw ConfigError("pyramid_levels: min_size must be >= 2");
    std::vector<LevelDims> levels{{width, height}};
    while (std::min(levels.back().width, levels.back().height) >= min_size) {
        const int w = static_cast<int>(std::ceil(levels.back().width * scale));
        const int h = static_cast<int>(std::ceil(levels.back().height * scale));
        if (w == levels.back().width && h == levels.back().height) break;
        levels.push_back({w, h});
    }
    if (max_levels > 0 && static_cast<int>(levels.size()) > max_levels) levels.resize(max_levels);
    return levels;
}

AffineMotion rescale_motion(const AffineMotion& m, double sx, double sy) {
    // D m D^{-1} with D = diag(sx, sy)
    AffineMotion out = m;
    out.a12 = m.a12 * sx / sy;
    out.a21 = m.a21 * sy / sx;
    out.tx = m.tx * sx;
    out.ty = m.ty * sy;
    return out;
}

Scene rescale_scene(const Scene& scene, int new_w, int new_h) {
    Scene out;
    const double sx = static_cast<double>(new_w) / scene.width();
    const double sy = static_cast<double>(new_h) / scene.height();
    out.foreground = resize_bilinear(scene.foreground, new_w, new_h);
    out.background = resize_bilinear(scene.background, new_w, new_h);
    out.alpha = resize_bilinear(scene.alpha, new_w, new_h);
    out.fg_motions.reserve(scene.fg_motions.size());
    out.bg_motions.reserve(scene.bg_motions.size());
    for (const AffineMotion& m : scene.fg_motions) out.fg_motions.push_back(rescale_motion(m, sx, sy));
    for (const AffineMotion& m : scene.bg_motions) out.bg_motions.push_back(rescale_motion(m, sx, sy));
    out.timing = scene.timing;
    return out;
}

}  // namespace lbd
