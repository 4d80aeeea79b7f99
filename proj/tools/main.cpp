#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lbd/kernels.hpp"
#include "lbd/pipeline.hpp"
#include "lbd/png_io.hpp"
#include "lbd/synth.hpp"

namespace fs = std::filesystem;
using namespace lbd;

namespace {

std::string frame_name(int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%03d.png", i);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<ImageBuffer> load_frames(const fs::path& dir) {
    std::vector<fs::path> names;
    if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string n = e.path().filename().string();
        if (n.rfind("frame_", 0) == 0 && n.size() > 4 && n.substr(n.size() - 4) == ".png")
            names.push_back(e.path());
    }
    std::sort(names.begin(), names.end());
    if (names.empty()) throw IoError("no frame_*.png files in '" + dir.string() + "'");
    std::vector<ImageBuffer> frames;
    frames.reserve(names.size());
    for (const auto& p : names) frames.push_back(read_png(p.string()));
    return frames;
}

// gt bundle written by `synth`: layers, matte and the motion file.
std::optional<Scene> try_load_truth(const fs::path& dir) {
    const fs::path l0 = dir / "gt_L0.png", l1 = dir / "gt_L1.png", a = dir / "gt_A.png",
                   mj = dir / "motions.json";
    if (!fs::exists(l0) || !fs::exists(l1) || !fs::exists(a) || !fs::exists(mj)) return {};
    Scene s;
    s.background = read_png(l0.string());
    s.foreground = read_png(l1.string());
    s.alpha = to_gray(read_png(a.string()));
    motions_from_json(read_text(mj), s);
    s.validate();
    return s;
}

void write_scene_outputs(const fs::path& out, const Scene& scene, const char* prefix) {
    write_png(scene.background, (out / (std::string(prefix) + "L0.png")).string());
    write_png(scene.foreground, (out / (std::string(prefix) + "L1.png")).string());
    write_png(scene.alpha, (out / (std::string(prefix) + "A.png")).string());
}

int cmd_synth(const std::string& config, const std::string& out_dir, const std::string& model,
              std::optional<std::uint64_t> seed) {
    SceneScript script = SceneScript::load(config);
    if (seed) script.seed = *seed;
    const RenderedSequence seq = render_sequence(script, parse_model_kind(model));
    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    for (std::size_t i = 0; i < seq.frames.size(); ++i)
        write_png(seq.frames[i], (out / frame_name(static_cast<int>(i))).string());
    write_png(seq.truth.background, (out / "gt_L0.png").string());
    write_png(seq.truth.foreground, (out / "gt_L1.png").string());
    write_png(seq.truth.alpha, (out / "gt_A.png").string());
    write_text(out / "motions.json", motions_to_json(seq.truth));
    std::cout << "wrote " << seq.frames.size() << " frames to " << out_dir << " (samples="
              << seq.truth.timing.samples << ")\n";
    return 0;
}

int cmd_deblur(const std::string& frames_dir, const std::string& config_path,
               const std::string& out_dir, const std::string& model_override, bool gt_init,
               const std::string& flow_dir, const std::string& fg_label,
               std::optional<std::uint64_t> seed) {
    RunConfig config = config_path.empty() ? RunConfig() : RunConfig::load(config_path);
    if (!model_override.empty()) config.model = parse_model_kind(model_override);
    if (!fg_label.empty()) config.fg_choice = parse_foreground_choice(fg_label);
    if (seed) config.seed = *seed;

    const fs::path in(frames_dir);
    const std::vector<ImageBuffer> frames = load_frames(in);
    std::optional<Scene> truth = try_load_truth(in);
    std::optional<Scene> init;
    if (gt_init) {
        if (!truth) throw IoError("--gt-init: no ground-truth bundle in '" + frames_dir + "'");
        init = truth;
    }
    std::optional<std::string> flow = flow_dir.empty() ? std::optional<std::string>{}
                                                       : std::optional<std::string>{flow_dir};

    const DeblurResult result = deblur_run(frames, config, init, flow);

    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    write_scene_outputs(out, result.scene, "");
    write_scene_outputs(out, result.init, "init_");
    write_text(out / "motions.json", motions_to_json(result.scene));
    write_text(out / "energy.csv", trace_to_csv(result.trace));
    if (truth) {
        const Metrics final_m = compute_metrics(result.scene, *truth);
        const Metrics init_m = compute_metrics(result.init, *truth);
        write_text(out / "metrics.json", metrics_to_json(final_m, init_m));
        std::cout << "background psnr " << init_m.background_psnr << " -> "
                  << final_m.background_psnr << " dB, alpha mae " << final_m.alpha_mae << "\n";
    } else {
        std::cout << "deblurred " << frames.size() << " frames into " << out_dir << "\n";
    }
    return 0;
}

int cmd_modelcmp(const std::string& config, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
    SceneScript script = SceneScript::load(config);
    if (seed) script.seed = *seed;
    const RenderedSequence prop = render_sequence(script, BlurModelKind::Proposed);
    const RenderedSequence conv = render_sequence(script, BlurModelKind::Conventional);
    fs::create_directories(fs::path(out_dir) / "proposed");
    fs::create_directories(fs::path(out_dir) / "conventional");
    std::ostringstream csv;
    csv << "frame,max_abs_diff,mean_abs_diff\n";
    for (std::size_t i = 0; i < prop.frames.size(); ++i) {
        write_png(prop.frames[i],
                  (fs::path(out_dir) / "proposed" / frame_name(static_cast<int>(i))).string());
        write_png(conv.frames[i],
                  (fs::path(out_dir) / "conventional" / frame_name(static_cast<int>(i))).string());
        double mx = 0.0, mean = 0.0;
        for (std::size_t p = 0; p < prop.frames[i].data.size(); ++p) {
            const double d = std::abs(prop.frames[i].data[p] - conv.frames[i].data[p]);
            mx = std::max(mx, d);
            mean += d;
        }
        mean /= prop.frames[i].data.size();
        csv << i << ',' << mx << ',' << mean << '\n';
    }
    write_text(fs::path(out_dir) / "cmp.csv", csv.str());

    const SpecialCaseReport rep = check_special_cases(script.seed);
    std::ostringstream js;
    js << "{\n  \"static_background\": " << rep.static_background
       << ",\n  \"static_foreground\": " << rep.static_foreground
       << ",\n  \"homogeneous_background\": " << rep.homogeneous_background << "\n}\n";
    write_text(fs::path(out_dir) / "special_cases.json", js.str());
    std::cout << "model comparison written to " << out_dir << "\n";
    return 0;
}

int cmd_kernelviz(const std::string& config, int frame, const std::string& pixel,
                  const std::string& out_dir, const std::string& model) {
    const SceneScript script = SceneScript::load(config);
    const Scene scene = build_scene(script);
    int px = -1, py = -1;
    if (std::sscanf(pixel.c_str(), "%d,%d", &px, &py) != 2)
        throw ConfigError("--pixel expects 'x,y'");
    const PixelKernels k = extract_pixel_kernels(scene, frame, px, py, parse_model_kind(model));
    fs::create_directories(out_dir);
    auto normalized = [](const ImageBuffer& img) {
        ImageBuffer v = img;
        const double mx = v.max_value();
        if (mx > 0.0)
            for (double& d : v.data) d /= mx;
        return v;
    };
    write_png(normalized(k.foreground), (fs::path(out_dir) / "fg_kernel.png").string());
    write_png(normalized(k.background), (fs::path(out_dir) / "bg_kernel.png").string());
    long fg_nz = 0, bg_nz = 0;
    for (double v : k.foreground.data) fg_nz += v > 0.0;
    for (double v : k.background.data) bg_nz += v > 0.0;
    std::ostringstream js;
    js << "{\n  \"foreground_sum\": " << k.foreground_sum()
       << ",\n  \"background_sum\": " << k.background_sum()
       << ",\n  \"foreground_nonzero\": " << fg_nz << ",\n  \"background_nonzero\": " << bg_nz
       << "\n}\n";
    write_text(fs::path(out_dir) / "kernel.json", js.str());
    std::cout << "pixel (" << px << "," << py << ") frame " << frame << ": fg weight "
              << k.foreground_sum() << ", bg weight " << k.background_sum() << "\n";
    return 0;
}

int cmd_eval(const std::string& result_dir, const std::string& truth_dir,
             const std::string& out_file) {
    const fs::path rd(result_dir), td(truth_dir);
    Scene est;
    est.background = read_png((rd / "L0.png").string());
    est.foreground = read_png((rd / "L1.png").string());
    est.alpha = to_gray(read_png((rd / "A.png").string()));
    motions_from_json(read_text(rd / "motions.json"), est);
    est.validate();
    const std::optional<Scene> truth = try_load_truth(td);
    if (!truth) throw IoError("no ground-truth bundle in '" + truth_dir + "'");
    const Metrics m = compute_metrics(est, *truth);
    const std::string js = metrics_to_json(m, {});
    if (out_file.empty())
        std::cout << js;
    else
        write_text(out_file, js);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"occlusion-aware layered video deblurring"};
    app.require_subcommand(1);

    std::string config, out_dir, model = "proposed", frames_dir, flow_dir, fg_label, pixel;
    std::string deblur_model;
    std::string result_dir, truth_dir, out_file;
    std::uint64_t seed_value = 0;
    bool seed_set = false, gt_init = false;
    int frame = 0;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option_function<std::uint64_t>(
            "--seed",
            [&](const std::uint64_t& v) {
                seed_value = v;
                seed_set = true;
            },
            "override the config seed");
    };

    CLI::App* synth = app.add_subcommand("synth", "render a blurred sequence from a scene script");
    synth->add_option("--config", config, "scene script JSON")->required();
    synth->add_option("--out", out_dir, "output directory")->required();
    synth->add_option("--model", model, "proposed|conventional");
    add_seed(synth);

    CLI::App* deblur = app.add_subcommand("deblur", "blind deblurring of a frame directory");
    deblur->add_option("--frames", frames_dir, "directory with frame_*.png")->required();
    deblur->add_option("--config", config, "run config JSON");
    deblur->add_option("--out", out_dir, "output directory")->required();
    deblur->add_option("--model", deblur_model, "proposed|conventional");
    deblur->add_flag("--gt-init", gt_init, "start from the ground-truth bundle in --frames");
    deblur->add_option("--flow", flow_dir, "directory with precomputed flow_*.flow files");
    deblur->add_option("--fg-label", fg_label, "auto|a|b: which motion is the occluder");
    add_seed(deblur);

    CLI::App* modelcmp = app.add_subcommand("modelcmp",
                                            "render a script under both blur models and diff");
    modelcmp->add_option("--config", config, "scene script JSON")->required();
    modelcmp->add_option("--out", out_dir, "output directory")->required();
    add_seed(modelcmp);

    CLI::App* kernelviz = app.add_subcommand("kernelviz", "extract per-pixel blur kernels");
    kernelviz->add_option("--config", config, "scene script JSON")->required();
    kernelviz->add_option("--frame", frame, "frame index (0-based)")->required();
    kernelviz->add_option("--pixel", pixel, "pixel as x,y")->required();
    kernelviz->add_option("--out", out_dir, "output directory")->required();
    kernelviz->add_option("--model", model, "proposed|conventional");

    CLI::App* eval = app.add_subcommand("eval", "score a result directory against ground truth");
    eval->add_option("--result", result_dir, "deblur output directory")->required();
    eval->add_option("--truth", truth_dir, "directory with the gt bundle")->required();
    eval->add_option("--out", out_file, "metrics JSON path (stdout when omitted)");

    try {
        app.parse(argc, argv);
        const std::optional<std::uint64_t> seed =
            seed_set ? std::optional<std::uint64_t>{seed_value} : std::nullopt;
        if (synth->parsed()) return cmd_synth(config, out_dir, model, seed);
        if (deblur->parsed())
            return cmd_deblur(frames_dir, config, out_dir, deblur_model, gt_init, flow_dir,
                              fg_label, seed);
        if (modelcmp->parsed()) return cmd_modelcmp(config, out_dir, seed);
        if (kernelviz->parsed()) return cmd_kernelviz(config, frame, pixel, out_dir, model);
        if (eval->parsed()) return cmd_eval(result_dir, truth_dir, out_file);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const SingleMotionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
