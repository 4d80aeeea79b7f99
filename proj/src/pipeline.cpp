#include "lbd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lbd/gradient.hpp"
#include "lbd/pyramid.hpp"
#include "lbd/warp.hpp"

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

SolverConfig parse_solver(const json& j) {
    SolverConfig s;
    check_keys(j,
               {"lambda1", "lambda2", "lambda3", "sigma_d", "sigma_a", "tau", "hyper_exponent",
                "beta_schedule", "cg_max_iter", "cg_rel_tol", "pd_iterations", "nm_max_evals",
                "inner_iterations"},
               "solver config");
    s.lambda1 = j.value("lambda1", s.lambda1);
    s.lambda2 = j.value("lambda2", s.lambda2);
    s.lambda3 = j.value("lambda3", s.lambda3);
    s.sigma_d = j.value("sigma_d", s.sigma_d);
    s.sigma_a = j.value("sigma_a", s.sigma_a);
    s.tau = j.value("tau", s.tau);
    s.hyper_exponent = j.value("hyper_exponent", s.hyper_exponent);
    if (j.contains("beta_schedule"))
        s.beta_schedule = j["beta_schedule"].get<std::vector<double>>();
    s.cg_max_iter = j.value("cg_max_iter", s.cg_max_iter);
    s.cg_rel_tol = j.value("cg_rel_tol", s.cg_rel_tol);
    s.pd_iterations = j.value("pd_iterations", s.pd_iterations);
    s.nm_max_evals = j.value("nm_max_evals", s.nm_max_evals);
    s.inner_iterations = j.value("inner_iterations", s.inner_iterations);
    return s;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run config: invalid JSON: ") + e.what());
    }
    try {
        RunConfig c;
        check_keys(j,
                   {"solver", "pyramid_scale", "min_level_size", "max_levels", "duty_cycle",
                    "samples", "model", "seed", "fg_label", "ransac"},
                   "run config");
        if (j.contains("solver")) c.solver = parse_solver(j["solver"]);
        c.pyramid_scale = j.value("pyramid_scale", c.pyramid_scale);
        c.min_level_size = j.value("min_level_size", c.min_level_size);
        c.max_levels = j.value("max_levels", c.max_levels);
        c.duty_cycle = j.value("duty_cycle", c.duty_cycle);
        c.samples = j.value("samples", c.samples);
        if (j.contains("model")) c.model = parse_model_kind(j["model"].get<std::string>());
        c.seed = j.value("seed", c.seed);
        if (j.contains("fg_label"))
            c.fg_choice = parse_foreground_choice(j["fg_label"].get<std::string>());
        if (j.contains("ransac")) {
            const json& r = j["ransac"];
            check_keys(r, {"iterations", "inlier_threshold", "min_inlier_fraction"}, "ransac");
            c.ransac.iterations = r.value("iterations", c.ransac.iterations);
            c.ransac.inlier_threshold = r.value("inlier_threshold", c.ransac.inlier_threshold);
            c.ransac.min_inlier_fraction =
                r.value("min_inlier_fraction", c.ransac.min_inlier_fraction);
        }
        if (c.pyramid_scale <= 0.0 || c.pyramid_scale >= 1.0)
            throw ConfigError("run config: pyramid_scale must lie in (0,1)");
        if (c.duty_cycle <= 0.0 || c.duty_cycle > 1.0)
            throw ConfigError("run config: duty_cycle must lie in (0,1]");
        if (c.samples != 0 && c.samples < 2)
            throw ConfigError("run config: samples must be 0 (auto) or >= 2");
        if (c.max_levels < 0) throw ConfigError("run config: max_levels must be >= 0");
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run config: ") + e.what());
    }
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open run config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

namespace {

int resolve_samples(const Scene& scene, int requested) {
    if (requested >= 2) return requested;
    return auto_sample_count(scene.fg_motions, scene.bg_motions, scene.timing, scene.width(),
                             scene.height());
}

}  // namespace

DeblurResult deblur_run(const std::vector<ImageBuffer>& frames, const RunConfig& config,
                        const std::optional<Scene>& gt_init,
                        const std::optional<std::string>& flow_dir) {
    if (frames.empty()) throw ConfigError("deblur_run: no frames");
    for (const auto& f : frames) require_same_shape(f, frames[0], "deblur_run frames");
    const int n = static_cast<int>(frames.size());
    const int full_w = frames[0].width, full_h = frames[0].height;

    CaptureTiming timing;
    timing.duty_cycle = config.duty_cycle;
    timing.frames = n;
    timing.samples = std::max(config.samples, 2);  // placeholder until resolved per level

    DeblurResult result;
    if (gt_init) {
        result.init = *gt_init;
        result.init.timing.duty_cycle = config.duty_cycle;
        if (config.samples >= 2) result.init.timing.samples = config.samples;
    } else {
        InitOptions opts;
        opts.flow = config.flow;
        opts.ransac = config.ransac;
        opts.ransac.seed = config.seed;
        opts.fg_choice = config.fg_choice;
        opts.flow_dir = flow_dir;
        result.init = initialize_from_frames(frames, timing, opts);
    }
    result.init.timing.samples = resolve_samples(result.init, config.samples);
    result.init.validate();

    const auto levels = pyramid_levels(full_w, full_h, config.pyramid_scale,
                                       config.min_level_size, config.max_levels);

    Scene scene;
    for (int li = static_cast<int>(levels.size()) - 1; li >= 0; --li) {
        const int w = levels[li].width, h = levels[li].height;
        scene = rescale_scene(li == static_cast<int>(levels.size()) - 1 ? result.init : scene, w,
                              h);
        scene.timing.samples = resolve_samples(scene, config.samples);

        std::vector<ImageBuffer> level_frames;
        level_frames.reserve(frames.size());
        for (const auto& f : frames) level_frames.push_back(resize_bilinear(f, w, h));

        const auto trace = alternate(scene, level_frames, config.solver, config.model);
        const int per_round = 3;
        for (std::size_t t = 0; t < trace.size(); ++t) {
            TraceRow row;
            row.step = "level" + std::to_string(li) + ".iter" +
                       std::to_string(t / per_round + 1) + "." + trace[t].step;
            row.energy = trace[t].energy;
            result.trace.push_back(row);
        }
    }
    result.scene = scene;
    return result;
}

std::pair<ImageBuffer, ImageBuffer> recoverable_masks(const Scene& truth) {
    truth.validate();
    const int w = truth.width(), h = truth.height();
    const LatentBlurOperator op(truth, BlurModelKind::Proposed);
    ImageBuffer cover_bg(w, h, 1), cover_fg(w, h, 1);
    ImageBuffer ones(w, h, 1, 1.0);
    const double inv_m = 1.0 / truth.timing.samples;
    for (int i = 0; i < truth.frames(); ++i) {
        for (int k = 0; k < truth.timing.samples; ++k) {
            // background influence: W0^T of the warped matte
            op.bg_plan(i, k).adjoint_add(op.warped_alpha(i, k), cover_bg, inv_m);
            // foreground influence: (1-A) * W1^T 1
            op.fg_plan(i, k).adjoint_add(ones, cover_fg, inv_m);
        }
    }
    const double eps = 1e-6;
    for (double& v : cover_bg.data) v = v > eps ? 1.0 : 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            cover_fg.at(x, y) =
                cover_fg.at(x, y) * (1.0 - truth.alpha.at(x, y)) > eps ? 1.0 : 0.0;
    return {cover_bg, cover_fg};
}

double masked_psnr(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer& mask) {
    require_same_shape(a, b, "masked_psnr");
    double se = 0.0;
    long count = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            if (mask.at(x, y) <= 0.0) continue;
            for (int c = 0; c < a.channels; ++c) {
                const double d = a.at(x, y, c) - b.at(x, y, c);
                se += d * d;
                ++count;
            }
        }
    if (count == 0) return 99.0;
    const double mse = se / count;
    double psnr = mse <= 0.0 ? 99.0 : 10.0 * std::log10(1.0 / mse);
    psnr = std::min(psnr, 99.0);
    return std::round(psnr * 100.0) / 100.0;
}

namespace {

// Gauge-invariant per-frame steps: frame i -> frame i+1.
std::vector<AffineMotion> step_motions(const std::vector<AffineMotion>& traj) {
    std::vector<AffineMotion> steps;
    for (std::size_t i = 0; i + 1 < traj.size(); ++i)
        steps.push_back(traj[i + 1].inverse().compose(traj[i]));
    return steps;
}

void step_errors(const std::vector<AffineMotion>& est, const std::vector<AffineMotion>& truth,
                 double& translation, double& linear) {
    const auto se = step_motions(est), st = step_motions(truth);
    translation = linear = 0.0;
    for (std::size_t i = 0; i < se.size(); ++i) {
        translation += std::hypot(se[i].tx - st[i].tx, se[i].ty - st[i].ty);
        const double d11 = se[i].a11 - st[i].a11, d12 = se[i].a12 - st[i].a12;
        const double d21 = se[i].a21 - st[i].a21, d22 = se[i].a22 - st[i].a22;
        linear += std::sqrt(d11 * d11 + d12 * d12 + d21 * d21 + d22 * d22);
    }
    translation /= se.size();
    linear /= se.size();
}

}  // namespace

Metrics compute_metrics(const Scene& estimate, const Scene& truth) {
    estimate.validate();
    truth.validate();
    if (estimate.width() != truth.width() || estimate.height() != truth.height() ||
        estimate.frames() != truth.frames())
        throw ShapeError("compute_metrics: estimate and truth disagree in shape");

    const int mid = truth.frames() / 2;
    // map estimate-reference coordinates into truth-reference coordinates
    const AffineMotion g_fg = truth.fg_motions[mid].compose(estimate.fg_motions[mid].inverse());
    const AffineMotion g_bg = truth.bg_motions[mid].compose(estimate.bg_motions[mid].inverse());
    const ImageBuffer bg_aligned = warp_affine(estimate.background, g_bg.inverse());
    const ImageBuffer fg_aligned = warp_affine(estimate.foreground, g_fg.inverse());
    const ImageBuffer alpha_aligned = warp_affine(estimate.alpha, g_fg.inverse());

    const auto masks = recoverable_masks(truth);
    Metrics m;
    m.background_psnr = masked_psnr(bg_aligned, truth.background, masks.first);
    m.foreground_psnr = masked_psnr(fg_aligned, truth.foreground, masks.second);

    double mae = 0.0;
    long count = 0;
    for (int y = 0; y < truth.height(); ++y)
        for (int x = 0; x < truth.width(); ++x) {
            mae += std::abs(alpha_aligned.at(x, y) - truth.alpha.at(x, y));
            ++count;
        }
    m.alpha_mae = mae / count;

    step_errors(estimate.bg_motions, truth.bg_motions, m.bg_translation_error, m.bg_linear_error);
    step_errors(estimate.fg_motions, truth.fg_motions, m.fg_translation_error, m.fg_linear_error);
    return m;
}

std::string motions_to_json(const Scene& scene) {
    json j;
    j["frames"] = scene.frames();
    j["duty_cycle"] = scene.timing.duty_cycle;
    j["samples"] = scene.timing.samples;
    auto dump = [](const std::vector<AffineMotion>& traj) {
        json arr = json::array();
        for (const AffineMotion& m : traj)
            arr.push_back({m.a11, m.a12, m.a21, m.a22, m.tx, m.ty});
        return arr;
    };
    j["fg_motions"] = dump(scene.fg_motions);
    j["bg_motions"] = dump(scene.bg_motions);
    return j.dump(2) + "\n";
}

void motions_from_json(const std::string& text, Scene& scene) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("motions json: invalid JSON: ") + e.what());
    }
    try {
        check_keys(j, {"frames", "duty_cycle", "samples", "fg_motions", "bg_motions"},
                   "motions json");
        scene.timing.frames = j.at("frames").get<int>();
        scene.timing.duty_cycle = j.at("duty_cycle").get<double>();
        scene.timing.samples = j.at("samples").get<int>();
        auto parse = [](const json& arr) {
            std::vector<AffineMotion> traj;
            for (const auto& e : arr) {
                if (!e.is_array() || e.size() != 6)
                    throw ConfigError("motions json: entries are [a11,a12,a21,a22,tx,ty]");
                AffineMotion m;
                m.a11 = e[0].get<double>();
                m.a12 = e[1].get<double>();
                m.a21 = e[2].get<double>();
                m.a22 = e[3].get<double>();
                m.tx = e[4].get<double>();
                m.ty = e[5].get<double>();
                traj.push_back(m);
            }
            return traj;
        };
        scene.fg_motions = parse(j.at("fg_motions"));
        scene.bg_motions = parse(j.at("bg_motions"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("motions json: ") + e.what());
    }
}

std::string metrics_to_json(const Metrics& final_metrics, const std::optional<Metrics>& init) {
    auto fill = [](const Metrics& m) {
        json j;
        j["background_psnr"] = m.background_psnr;
        j["foreground_psnr"] = m.foreground_psnr;
        j["alpha_mae"] = m.alpha_mae;
        j["bg_translation_error"] = m.bg_translation_error;
        j["fg_translation_error"] = m.fg_translation_error;
        j["bg_linear_error"] = m.bg_linear_error;
        j["fg_linear_error"] = m.fg_linear_error;
        return j;
    };
    json j = fill(final_metrics);
    if (init) j["init"] = fill(*init);
    return j.dump(2) + "\n";
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
    std::ostringstream out;
    out << "step,data_term,layer_prior,alpha_tv,alpha_binary,total\n";
    out.precision(12);
    for (const TraceRow& r : trace)
        out << r.step << ',' << r.energy.data_term << ',' << r.energy.layer_prior << ','
            << r.energy.alpha_tv << ',' << r.energy.alpha_binary << ',' << r.energy.total
            << '\n';
    return out.str();
}

}  // namespace lbd
