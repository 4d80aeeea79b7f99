#include "lbd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lbd/png_io.hpp"

namespace lbd {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError(std::string(ctx) + ": unknown key '" + it.key() + "'");
    }
}

TextureSpec parse_texture(const json& j, const char* ctx) {
    TextureSpec t;
    if (!j.is_object()) throw ConfigError(std::string(ctx) + ": texture must be an object");
    check_keys(j, {"type", "value", "period", "low", "high", "seed", "smooth", "path"}, ctx);
    t.type = j.value("type", t.type);
    t.value = j.value("value", t.value);
    t.period = j.value("period", t.period);
    t.low = j.value("low", t.low);
    t.high = j.value("high", t.high);
    t.seed = j.value("seed", t.seed);
    t.smooth = j.value("smooth", t.smooth);
    t.path = j.value("path", t.path);
    if (t.type != "constant" && t.type != "checkerboard" && t.type != "noise" &&
        t.type != "file")
        throw ConfigError(std::string(ctx) + ": unknown texture type '" + t.type + "'");
    return t;
}

MaskSpec parse_mask(const json& j) {
    MaskSpec m;
    if (!j.is_object()) throw ConfigError("mask: must be an object");
    check_keys(j, {"type", "cx", "cy", "radius", "x0", "y0", "x1", "y1", "period", "bar_width",
                   "phase", "path"},
               "mask");
    m.type = j.value("type", m.type);
    m.cx = j.value("cx", m.cx);
    m.cy = j.value("cy", m.cy);
    m.radius = j.value("radius", m.radius);
    m.x0 = j.value("x0", m.x0);
    m.y0 = j.value("y0", m.y0);
    m.x1 = j.value("x1", m.x1);
    m.y1 = j.value("y1", m.y1);
    m.period = j.value("period", m.period);
    m.bar_width = j.value("bar_width", m.bar_width);
    m.phase = j.value("phase", m.phase);
    m.path = j.value("path", m.path);
    if (m.type != "disk" && m.type != "box" && m.type != "fence" && m.type != "file")
        throw ConfigError("mask: unknown type '" + m.type + "'");
    return m;
}

AffineMotion parse_motion_entry(const json& j, const char* ctx) {
    if (!j.is_array() || j.size() != 6)
        throw ConfigError(std::string(ctx) + ": motion entries are [a11,a12,a21,a22,tx,ty]");
    AffineMotion m;
    m.a11 = j[0].get<double>();
    m.a12 = j[1].get<double>();
    m.a21 = j[2].get<double>();
    m.a22 = j[3].get<double>();
    m.tx = j[4].get<double>();
    m.ty = j[5].get<double>();
    return m;
}

std::vector<AffineMotion> parse_motions(const json& j, int frames, const char* ctx) {
    std::vector<AffineMotion> out;
    if (j.is_array()) {
        for (const auto& e : j) out.push_back(parse_motion_entry(e, ctx));
    } else if (j.is_object()) {
        check_keys(j, {"type", "velocity", "motions"}, ctx);
        const std::string type = j.value("type", "identity");
        if (type == "identity") {
            out.assign(frames + 1, AffineMotion::identity());
        } else if (type == "linear") {
            if (!j.contains("velocity") || !j["velocity"].is_array() || j["velocity"].size() != 2)
                throw ConfigError(std::string(ctx) + ": linear motion needs velocity [vx,vy]");
            const double vx = j["velocity"][0].get<double>();
            const double vy = j["velocity"][1].get<double>();
            // on-screen content velocity; sampling position moves the other way
            for (int i = 0; i <= frames; ++i)
                out.push_back(AffineMotion::translation(-vx * i, -vy * i));
        } else if (type == "list") {
            for (const auto& e : j.at("motions")) out.push_back(parse_motion_entry(e, ctx));
        } else {
            throw ConfigError(std::string(ctx) + ": unknown motion type '" + type + "'");
        }
    } else {
        throw ConfigError(std::string(ctx) + ": motion must be an object or a list");
    }
    if (out.size() != static_cast<std::size_t>(frames) + 1)
        throw ConfigError(std::string(ctx) + ": need frames+1 motions, got " +
                          std::to_string(out.size()));
    return out;
}

void box_blur_inplace(ImageBuffer& img) {
    ImageBuffer src = img;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double s = 0.0;
                int cnt = 0;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int xx = x + dx, yy = y + dy;
                        if (xx < 0 || yy < 0 || xx >= img.width || yy >= img.height) continue;
                        s += src.at(xx, yy, c);
                        ++cnt;
                    }
                img.at(x, y, c) = s / cnt;
            }
}

void normalize_range(ImageBuffer& img, double lo, double hi) {
    const double mn = img.min_value(), mx = img.max_value();
    if (mx - mn < 1e-12) {
        img.fill(0.5 * (lo + hi));
        return;
    }
    for (double& v : img.data) v = lo + (hi - lo) * (v - mn) / (mx - mn);
}

}  // namespace

ImageBuffer make_texture(const TextureSpec& spec, int w, int h, int channels) {
    if (spec.type == "constant") return ImageBuffer(w, h, channels, spec.value);
    if (spec.type == "checkerboard") {
        if (spec.period < 1) throw ConfigError("checkerboard: period must be >= 1");
        ImageBuffer img(w, h, channels);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const bool on = ((x / spec.period) + (y / spec.period)) % 2 == 0;
                for (int c = 0; c < channels; ++c) img.at(x, y, c) = on ? spec.high : spec.low;
            }
        return img;
    }
    if (spec.type == "noise") {
        ImageBuffer img(w, h, channels);
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (double& v : img.data) v = uni(rng);
        for (int i = 0; i < spec.smooth; ++i) box_blur_inplace(img);
        normalize_range(img, 0.05, 0.95);
        return img;
    }
    if (spec.type == "file") {
        ImageBuffer img = read_png(spec.path);
        if (img.channels == channels) {
        } else if (channels == 1) {
            img = to_gray(img);
        } else if (img.channels == 1 && channels == 3) {
            ImageBuffer rgb(img.width, img.height, 3);
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x)
                    for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = img.at(x, y);
            img = rgb;
        } else {
            throw ConfigError("texture file: cannot adapt channel count");
        }
        if (img.width != w || img.height != h) img = resize_bilinear(img, w, h);
        return img;
    }
    throw ConfigError("make_texture: unknown type '" + spec.type + "'");
}

ImageBuffer make_mask(const MaskSpec& spec, int w, int h) {
    ImageBuffer alpha(w, h, 1, 1.0);
    if (spec.type == "disk") {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double dx = x - spec.cx, dy = y - spec.cy;
                if (dx * dx + dy * dy <= spec.radius * spec.radius) alpha.at(x, y) = 0.0;
            }
        return alpha;
    }
    if (spec.type == "box") {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (x >= spec.x0 && x <= spec.x1 && y >= spec.y0 && y <= spec.y1)
                    alpha.at(x, y) = 0.0;
        return alpha;
    }
    if (spec.type == "fence") {
        if (spec.period < 1 || spec.bar_width < 0 || spec.bar_width > spec.period)
            throw ConfigError("fence mask: need 0 <= bar_width <= period, period >= 1");
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int u = ((x + spec.phase) % spec.period + spec.period) % spec.period;
                if (u < spec.bar_width) alpha.at(x, y) = 0.0;
            }
        return alpha;
    }
    if (spec.type == "file") {
        ImageBuffer img = to_gray(read_png(spec.path));
        if (img.width != w || img.height != h) img = resize_bilinear(img, w, h);
        return img;
    }
    throw ConfigError("make_mask: unknown type '" + spec.type + "'");
}

SceneScript SceneScript::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scene script: invalid JSON: ") + e.what());
    }
    try {
        SceneScript s;
        check_keys(j,
                   {"width", "height", "channels", "frames", "foreground", "background", "mask",
                    "fg_motion", "bg_motion", "duty_cycle", "samples", "noise_sigma", "seed"},
                   "scene script");
        s.width = j.value("width", s.width);
        s.height = j.value("height", s.height);
        s.channels = j.value("channels", s.channels);
        s.frames = j.value("frames", s.frames);
        if (s.width < 4 || s.height < 4) throw ConfigError("scene script: image too small");
        if (s.channels != 1 && s.channels != 3)
            throw ConfigError("scene script: channels must be 1 or 3");
        if (s.frames < 1) throw ConfigError("scene script: frames must be >= 1");
        if (j.contains("foreground")) s.foreground = parse_texture(j["foreground"], "foreground");
        if (j.contains("background")) s.background = parse_texture(j["background"], "background");
        if (j.contains("mask")) s.mask = parse_mask(j["mask"]);
        s.fg_motions = j.contains("fg_motion")
                           ? parse_motions(j["fg_motion"], s.frames, "fg_motion")
                           : std::vector<AffineMotion>(s.frames + 1, AffineMotion::identity());
        s.bg_motions = j.contains("bg_motion")
                           ? parse_motions(j["bg_motion"], s.frames, "bg_motion")
                           : std::vector<AffineMotion>(s.frames + 1, AffineMotion::identity());
        s.timing.duty_cycle = j.value("duty_cycle", 0.5);
        s.timing.samples = j.value("samples", 0);
        s.timing.frames = s.frames;
        s.noise_sigma = j.value("noise_sigma", 0.0);
        s.seed = j.value("seed", s.seed);
        if (s.noise_sigma < 0) throw ConfigError("scene script: noise_sigma must be >= 0");
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scene script: ") + e.what());
    }
}

SceneScript SceneScript::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene script '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

Scene build_scene(const SceneScript& script) {
    Scene scene;
    scene.foreground = make_texture(script.foreground, script.width, script.height,
                                    script.channels);
    scene.background = make_texture(script.background, script.width, script.height,
                                    script.channels);
    scene.alpha = make_mask(script.mask, script.width, script.height);
    scene.fg_motions = script.fg_motions;
    scene.bg_motions = script.bg_motions;
    scene.timing = script.timing;
    if (scene.timing.samples == 0)
        scene.timing.samples = auto_sample_count(scene.fg_motions, scene.bg_motions, scene.timing,
                                                 script.width, script.height);
    scene.validate();
    return scene;
}

RenderedSequence render_sequence(const SceneScript& script, BlurModelKind kind) {
    if (script.noise_sigma < 0.0) throw ConfigError("render_sequence: noise_sigma must be >= 0");
    RenderedSequence out;
    out.truth = build_scene(script);
    LatentBlurOperator op(out.truth, kind);
    for (int i = 0; i < out.truth.frames(); ++i) {
        ImageBuffer frame = op.apply_frame(i, out.truth.background, out.truth.foreground);
        frame.clamp01();
        if (script.noise_sigma > 0.0) {
            std::seed_seq sq{script.seed, static_cast<std::uint64_t>(i)};
            std::mt19937_64 rng(sq);
            std::normal_distribution<double> gauss(0.0, script.noise_sigma);
            for (double& v : frame.data) v += gauss(rng);
            frame.clamp01();
        }
        out.frames.push_back(std::move(frame));
    }
    return out;
}

DenseMatrix dense_operator(const Scene& scene, int frame, BlurModelKind kind) {
    scene.validate();
    const int n = scene.width() * scene.height();
    if (n > 4096)
        throw ConfigError("dense_operator: scene has " + std::to_string(n) +
                          " pixels, limit is 4096");
    LatentBlurOperator op(scene, kind);
    const int rows = n * scene.channels();
    DenseMatrix K(rows, 2 * n);
    ImageBuffer basis(scene.width(), scene.height(), scene.channels());
    ImageBuffer zero(scene.width(), scene.height(), scene.channels());
    for (int side = 0; side < 2; ++side) {
        for (int p = 0; p < n; ++p) {
            for (int c = 0; c < scene.channels(); ++c)
                basis.data[static_cast<std::size_t>(p) * scene.channels() + c] = 1.0;
            const ImageBuffer col = side == 0 ? op.apply_frame(frame, basis, zero)
                                              : op.apply_frame(frame, zero, basis);
            for (int r = 0; r < rows; ++r) K.at(r, side * n + p) = col.data[r];
            for (int c = 0; c < scene.channels(); ++c)
                basis.data[static_cast<std::size_t>(p) * scene.channels() + c] = 0.0;
        }
    }
    return K;
}

DenseMatrix dense_alpha_operator(const Scene& scene, int frame, BlurModelKind kind) {
    scene.validate();
    const int n = scene.width() * scene.height();
    if (n > 4096)
        throw ConfigError("dense_alpha_operator: scene has " + std::to_string(n) +
                          " pixels, limit is 4096");
    AlphaBlurOperator op(scene, kind);
    const int rows = n * scene.channels();
    DenseMatrix K(rows, n);
    ImageBuffer basis(scene.width(), scene.height(), 1);
    for (int p = 0; p < n; ++p) {
        basis.data[p] = 1.0;
        const ImageBuffer col = op.apply_frame(frame, basis);
        for (int r = 0; r < rows; ++r) K.at(r, p) = col.data[r];
        basis.data[p] = 0.0;
    }
    return K;
}

namespace {

std::vector<AffineMotion> random_trajectory(std::mt19937_64& rng, int frames, double linear_amp,
                                            double trans_amp) {
    std::uniform_real_distribution<double> lin(-linear_amp, linear_amp);
    std::uniform_real_distribution<double> tr(-trans_amp, trans_amp);
    std::vector<AffineMotion> out;
    for (int i = 0; i <= frames; ++i) {
        AffineMotion m;
        m.a11 = 1.0 + lin(rng);
        m.a12 = lin(rng);
        m.a21 = lin(rng);
        m.a22 = 1.0 + lin(rng);
        m.tx = tr(rng);
        m.ty = tr(rng);
        out.push_back(m);
    }
    return out;
}

}  // namespace

Scene make_test_scene(std::uint64_t seed, int w, int h, int channels, int frames, int samples) {
    std::mt19937_64 rng(seed);
    TextureSpec noise;
    noise.type = "noise";
    noise.smooth = 2;
    Scene scene;
    noise.seed = rng();
    scene.foreground = make_texture(noise, w, h, channels);
    noise.seed = rng();
    scene.background = make_texture(noise, w, h, channels);
    noise.seed = rng();
    noise.smooth = 3;
    scene.alpha = make_texture(noise, w, h, 1);
    normalize_range(scene.alpha, 0.0, 1.0);
    scene.fg_motions = random_trajectory(rng, frames, 0.02, 2.0);
    scene.bg_motions = random_trajectory(rng, frames, 0.02, 2.0);
    scene.timing.duty_cycle = 0.5;
    scene.timing.samples = samples;
    scene.timing.frames = frames;
    scene.validate();
    return scene;
}

SpecialCaseReport check_special_cases(std::uint64_t seed) {
    SpecialCaseReport report;
    const int frames = 3;
    Scene base = make_test_scene(seed, 64, 64, 1, frames, 4);

    auto max_model_gap = [](const Scene& s) {
        LatentBlurOperator prop(s, BlurModelKind::Proposed);
        LatentBlurOperator conv(s, BlurModelKind::Conventional);
        double m = 0.0;
        for (int i = 0; i < s.frames(); ++i)
            m = std::max(m, max_abs_diff(prop.apply_frame(i, s.background, s.foreground),
                                         conv.apply_frame(i, s.background, s.foreground)));
        return m;
    };

    AffineMotion fixed;
    fixed.a11 = 1.01;
    fixed.a12 = 0.015;
    fixed.a21 = -0.01;
    fixed.a22 = 0.995;
    fixed.tx = 1.25;
    fixed.ty = -0.75;

    Scene s1 = base;
    s1.bg_motions.assign(frames + 1, fixed);
    report.static_background = max_model_gap(s1);

    Scene s2 = base;
    s2.fg_motions.assign(frames + 1, fixed);
    report.static_foreground = max_model_gap(s2);

    Scene s3 = base;
    s3.background.fill(0.4);
    report.homogeneous_background = max_model_gap(s3);

    return report;
}

}  // namespace lbd
