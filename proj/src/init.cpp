#include "lbd/init.hpp"

#include <cstdio>

#include "lbd/warp.hpp"

namespace lbd {

ForegroundChoice parse_foreground_choice(const std::string& name) {
    if (name == "auto") return ForegroundChoice::Auto;
    if (name == "a") return ForegroundChoice::MotionA;
    if (name == "b") return ForegroundChoice::MotionB;
    throw ConfigError("foreground choice must be auto|a|b, got '" + name + "'");
}

Scene init_scene(const std::vector<ImageBuffer>& frames,
                 const std::vector<std::vector<AffineMotion>>& trajectories,
                 const std::vector<std::vector<MotionLabel>>& label_maps, int foreground_slot,
                 const CaptureTiming& timing) {
    const int n = static_cast<int>(frames.size());
    if (n < 1) throw ShapeError("init_scene: no frames");
    if (trajectories.size() != 2 || foreground_slot < 0 || foreground_slot > 1)
        throw ConfigError("init_scene: need two trajectories and a valid foreground slot");
    for (const auto& t : trajectories)
        if (t.size() != static_cast<std::size_t>(n) + 1)
            throw ConfigError("init_scene: trajectories need frames+1 motions");
    if (label_maps.size() != static_cast<std::size_t>(n) - 1)
        throw ConfigError("init_scene: need one label map per adjacent pair");
    const int w = frames[0].width, h = frames[0].height;
    for (const auto& f : frames) require_same_shape(f, frames[0], "init_scene frames");
    for (const auto& lm : label_maps)
        if (lm.size() != static_cast<std::size_t>(w) * h)
            throw ShapeError("init_scene: label map size mismatch");

    const int bg_slot = 1 - foreground_slot;
    const MotionLabel bg_label = bg_slot == 0 ? MotionLabel::A : MotionLabel::B;

    Scene scene;
    scene.timing = timing;
    scene.timing.frames = n;
    scene.fg_motions = trajectories[foreground_slot];
    scene.bg_motions = trajectories[bg_slot];

    // Each layer: average the frames pulled back into reference coordinates.
    auto average_layer = [&](const std::vector<AffineMotion>& traj) {
        ImageBuffer acc(w, h, frames[0].channels);
        for (int i = 0; i < n; ++i) axpy(1.0 / n, warp_affine(frames[i], traj[i].inverse()), acc);
        return acc;
    };
    scene.foreground = average_layer(scene.fg_motions);
    scene.background = average_layer(scene.bg_motions);

    // The matte rides on the foreground layer: average the per-pair
    // background indicators after motion compensation.
    ImageBuffer acc(w, h, 1);
    ImageBuffer indicator(w, h, 1);
    const int pairs = n - 1;
    if (pairs == 0) {
        scene.alpha = ImageBuffer(w, h, 1, 1.0);
    } else {
        for (int i = 0; i < pairs; ++i) {
            for (int p = 0; p < w * h; ++p)
                indicator.data[p] = label_maps[i][p] == bg_label ? 1.0 : 0.0;
            axpy(1.0 / pairs, warp_affine(indicator, scene.fg_motions[i].inverse()), acc);
        }
        scene.alpha = acc;
        scene.alpha.clamp01();
    }
    scene.validate();
    return scene;
}

namespace {

// Keep slot identity stable across pairs: flip when the label maps of two
// consecutive pairs agree better crosswise than straight.
bool should_swap(const std::vector<MotionLabel>& prev, const std::vector<MotionLabel>& cur) {
    long straight = 0, crossed = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const MotionLabel p = prev[i], c = cur[i];
        if (p == MotionLabel::Outlier || c == MotionLabel::Outlier) continue;
        if (p == c)
            ++straight;
        else
            ++crossed;
    }
    return crossed > straight;
}

}  // namespace

Scene initialize_from_frames(const std::vector<ImageBuffer>& frames, const CaptureTiming& timing,
                             const InitOptions& options) {
    const int n = static_cast<int>(frames.size());
    if (n < 2) throw ConfigError("initialize_from_frames: need at least 2 frames");

    std::vector<AffineMotion> step_a, step_b;          // per pair
    std::vector<std::vector<MotionLabel>> label_maps;  // per pair
    long area_a = 0, area_b = 0;
    for (int i = 0; i + 1 < n; ++i) {
        FlowField flow;
        if (options.flow_dir) {
            char name[32];
            std::snprintf(name, sizeof name, "flow_%03d.flow", i);
            flow = load_flow(*options.flow_dir + "/" + name);
            if (flow.u.width != frames[i].width || flow.u.height != frames[i].height)
                throw IoError("flow file size does not match the frames");
        } else {
            flow = compute_flow(frames[i], frames[i + 1], options.flow);
        }
        RansacConfig rc = options.ransac;
        rc.seed = options.ransac.seed + static_cast<std::uint64_t>(i) * 7919;
        TwoMotionFit fit = ransac_two_affine(flow, rc);

        if (!label_maps.empty() && should_swap(label_maps.back(), fit.labels)) {
            std::swap(fit.motion_a, fit.motion_b);
            for (MotionLabel& l : fit.labels)
                l = l == MotionLabel::A
                        ? MotionLabel::B
                        : (l == MotionLabel::B ? MotionLabel::A : MotionLabel::Outlier);
        }
        step_a.push_back(fit.motion_a);
        step_b.push_back(fit.motion_b);
        for (MotionLabel l : fit.labels) {
            if (l == MotionLabel::A) ++area_a;
            if (l == MotionLabel::B) ++area_b;
        }
        label_maps.push_back(std::move(fit.labels));
    }

    // Chain the per-pair steps into frame -> reference maps.
    const int ref = n / 2;
    auto chain = [&](const std::vector<AffineMotion>& steps) {
        std::vector<AffineMotion> traj(n + 1);
        traj[ref] = AffineMotion::identity();
        for (int i = ref - 1; i >= 0; --i) traj[i] = traj[i + 1].compose(steps[i]);
        for (int i = ref + 1; i < n; ++i) traj[i] = traj[i - 1].compose(steps[i - 1].inverse());
        // virtual pose past the last frame: repeat the final step
        traj[n] = traj[n - 1].compose(steps[n - 2].inverse());
        return traj;
    };
    std::vector<std::vector<AffineMotion>> trajectories{chain(step_a), chain(step_b)};

    int fg_slot;
    switch (options.fg_choice) {
        case ForegroundChoice::MotionA: fg_slot = 0; break;
        case ForegroundChoice::MotionB: fg_slot = 1; break;
        default: fg_slot = area_a <= area_b ? 0 : 1; break;
    }

    return init_scene(frames, trajectories, label_maps, fg_slot, timing);
}

}  // namespace lbd
