#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "lbd/kernels.hpp"
#include "lbd/png_io.hpp"
#include "lbd/solver.hpp"
#include "lbd/synth.hpp"
#include "oracle_helpers.hpp"

using namespace lbd;

namespace {

std::string small_script_json() {
    return R"({
        "width": 24, "height": 20, "channels": 1, "frames": 3,
        "foreground": {"type": "checkerboard", "period": 3, "low": 0.2, "high": 0.9},
        "background": {"type": "noise", "seed": 5, "smooth": 2},
        "mask": {"type": "disk", "cx": 12, "cy": 10, "radius": 6},
        "fg_motion": {"type": "linear", "velocity": [1.5, 0.0]},
        "bg_motion": {"type": "linear", "velocity": [-1.0, 0.5]},
        "duty_cycle": 0.5, "samples": 4, "noise_sigma": 0.0, "seed": 9
    })";
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("script parsing accepts the documented keys") {
    const SceneScript s = SceneScript::from_json_text(small_script_json());
    CHECK(s.width == 24);
    CHECK(s.height == 20);
    CHECK(s.frames == 3);
    CHECK(s.foreground.type == "checkerboard");
    CHECK(s.foreground.period == 3);
    CHECK(s.background.smooth == 2);
    CHECK(s.mask.radius == 6);
    CHECK(s.timing.duty_cycle == 0.5);
    CHECK(s.timing.samples == 4);
    REQUIRE(s.fg_motions.size() == 4);
    CHECK(s.fg_motions[2].tx == doctest::Approx(-3.0));  // content moves +1.5 px/frame
    CHECK(s.bg_motions[2].tx == doctest::Approx(2.0));
    CHECK(s.bg_motions[2].ty == doctest::Approx(-1.0));
}

TEST_CASE("script parsing rejects unknown keys everywhere") {
    CHECK_THROWS_AS(SceneScript::from_json_text(R"({"width": 8, "bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(SceneScript::from_json_text(
                        R"({"foreground": {"type": "noise", "sigma": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(SceneScript::from_json_text(R"({"mask": {"type": "disk", "r": 2}})"),
                    ConfigError);
    CHECK_THROWS_AS(SceneScript::from_json_text(R"({"fg_motion": {"type": "spline"}})"),
                    ConfigError);
    CHECK_THROWS_AS(SceneScript::from_json_text("not json"), ConfigError);
}

TEST_CASE("script motion lists must carry frames plus one entries") {
    const char* txt = R"({
        "frames": 2,
        "fg_motion": [[1,0,0,1,0,0],[1,0,0,1,1,0],[1,0,0,1,2,0]],
        "bg_motion": {"type": "identity"}
    })";
    const SceneScript s = SceneScript::from_json_text(txt);
    REQUIRE(s.fg_motions.size() == 3);
    CHECK(s.fg_motions[2].tx == 2.0);
    CHECK(s.bg_motions[1].is_identity());

    CHECK_THROWS_AS(SceneScript::from_json_text(
                        R"({"frames": 2, "fg_motion": [[1,0,0,1,0,0]]})"),
                    ConfigError);
    CHECK_THROWS_AS(SceneScript::from_json_text(R"({"fg_motion": [[1,0,0,1]]})"), ConfigError);
}

TEST_CASE("textures are deterministic with frozen patterns") {
    TextureSpec checker;
    checker.type = "checkerboard";
    checker.period = 2;
    checker.low = 0.1;
    checker.high = 0.9;
    const ImageBuffer c = make_texture(checker, 6, 4, 1);
    CHECK(c.at(0, 0) == 0.9);  // (0/2 + 0/2) even
    CHECK(c.at(1, 0) == 0.9);
    CHECK(c.at(2, 0) == 0.1);
    CHECK(c.at(2, 2) == 0.9);

    TextureSpec flat;
    flat.type = "constant";
    flat.value = 0.42;
    const ImageBuffer k = make_texture(flat, 5, 5, 3);
    CHECK(k.min_value() == 0.42);
    CHECK(k.max_value() == 0.42);

    TextureSpec noise;
    noise.type = "noise";
    noise.seed = 77;
    noise.smooth = 1;
    const ImageBuffer n1 = make_texture(noise, 12, 12, 1);
    const ImageBuffer n2 = make_texture(noise, 12, 12, 1);
    CHECK(max_abs_diff(n1, n2) == 0.0);
    CHECK(n1.min_value() >= 0.0);
    CHECK(n1.max_value() <= 1.0);
    noise.seed = 78;
    CHECK(max_abs_diff(make_texture(noise, 12, 12, 1), n1) > 0.0);

    TextureSpec bad;
    bad.type = "perlin";
    CHECK_THROWS_AS(make_texture(bad, 4, 4, 1), ConfigError);
}

TEST_CASE("masks carve the foreground silhouette") {
    MaskSpec disk;
    disk.type = "disk";
    disk.cx = 8;
    disk.cy = 8;
    disk.radius = 4;
    const ImageBuffer d = make_mask(disk, 16, 16);
    CHECK(d.at(8, 8) == 0.0);   // inside the shape = foreground
    CHECK(d.at(0, 0) == 1.0);
    CHECK(d.at(8, 3) == 1.0);

    MaskSpec box;
    box.type = "box";
    box.x0 = 2;
    box.y0 = 3;
    box.x1 = 6;
    box.y1 = 5;
    const ImageBuffer b = make_mask(box, 10, 8);
    CHECK(b.at(4, 4) == 0.0);
    CHECK(b.at(7, 4) == 1.0);

    MaskSpec fence;
    fence.type = "fence";
    fence.period = 4;
    fence.bar_width = 2;
    fence.phase = 0;
    const ImageBuffer f = make_mask(fence, 12, 4);
    for (int x = 0; x < 12; ++x)
        CHECK(f.at(x, 1) == ((x % 4) < 2 ? 0.0 : 1.0));

    MaskSpec shifted = fence;
    shifted.phase = 1;
    const ImageBuffer g = make_mask(shifted, 12, 4);
    CHECK(g.at(0, 0) == 0.0);
    CHECK(g.at(2, 0) == 1.0);
}

TEST_CASE("file textures and masks round-trip through png") {
    const auto tex_path = temp_file("lbd_synth_tex.png");
    const auto mask_path = temp_file("lbd_synth_mask.png");
    std::mt19937_64 rng(6);
    ImageBuffer tex = oracle::random_image(rng, 10, 7, 3);
    write_png(tex, tex_path.string());
    ImageBuffer mk(10, 7, 1);
    for (int x = 0; x < 10; ++x)
        for (int y = 0; y < 7; ++y) mk.at(x, y) = x < 5 ? 0.0 : 1.0;
    write_png(mk, mask_path.string());

    TextureSpec tf;
    tf.type = "file";
    tf.path = tex_path.string();
    const ImageBuffer loaded = make_texture(tf, 10, 7, 3);
    CHECK(max_abs_diff(loaded, tex) < 0.5 / 255 + 1e-12);  // 8-bit quantization only

    MaskSpec mf;
    mf.type = "file";
    mf.path = mask_path.string();
    const ImageBuffer lm = make_mask(mf, 10, 7);
    CHECK(lm.at(0, 0) == 0.0);
    CHECK(lm.at(9, 0) == 1.0);

    TextureSpec missing;
    missing.type = "file";
    missing.path = "/nonexistent/file.png";
    CHECK_THROWS_AS(make_texture(missing, 4, 4, 1), IoError);

    std::filesystem::remove(tex_path);
    std::filesystem::remove(mask_path);
}

TEST_CASE("build_scene resolves the automatic sample count") {
    SceneScript s = SceneScript::from_json_text(small_script_json());
    s.timing.samples = 0;
    const Scene sc = build_scene(s);
    CHECK(sc.timing.samples >= 2);
    CHECK(sc.timing.samples <= 30);
    CHECK(sc.frames() == 3);
    CHECK_NOTHROW(sc.validate());

    s.timing.samples = 7;
    CHECK(build_scene(s).timing.samples == 7);
}

TEST_CASE("identity script renders the composite and zero sigma is deterministic") {
    const char* txt = R"({
        "width": 16, "height": 12, "frames": 2,
        "foreground": {"type": "constant", "value": 0.8},
        "background": {"type": "checkerboard", "period": 2},
        "mask": {"type": "disk", "cx": 8, "cy": 6, "radius": 4},
        "fg_motion": {"type": "identity"}, "bg_motion": {"type": "identity"},
        "samples": 3
    })";
    const SceneScript s = SceneScript::from_json_text(txt);
    for (const auto kind : {BlurModelKind::Proposed, BlurModelKind::Conventional}) {
        const RenderedSequence seq = render_sequence(s, kind);
        REQUIRE(seq.frames.size() == 2);
        const ImageBuffer expect =
            composite(seq.truth.foreground, seq.truth.background, seq.truth.alpha);
        for (const auto& f : seq.frames) CHECK(max_abs_diff(f, expect) < 1e-12);
    }
}

TEST_CASE("noise is seeded per frame and reproducible") {
    SceneScript s = SceneScript::from_json_text(small_script_json());
    s.noise_sigma = 0.05;
    const RenderedSequence a = render_sequence(s, BlurModelKind::Proposed);
    const RenderedSequence b = render_sequence(s, BlurModelKind::Proposed);
    for (std::size_t i = 0; i < a.frames.size(); ++i)
        CHECK(max_abs_diff(a.frames[i], b.frames[i]) == 0.0);
    CHECK(max_abs_diff(a.frames[0], a.frames[1]) > 0.0);

    s.noise_sigma = 0.0;
    const RenderedSequence clean = render_sequence(s, BlurModelKind::Proposed);
    CHECK(max_abs_diff(a.frames[0], clean.frames[0]) > 0.0);
    for (const auto& f : a.frames) {
        CHECK(f.min_value() >= 0.0);
        CHECK(f.max_value() <= 1.0);
    }

    s.noise_sigma = -0.1;
    CHECK_THROWS_AS(render_sequence(s, BlurModelKind::Proposed), ConfigError);
}

TEST_CASE("dense operator blocks for the static unoccluded case") {
    Scene sc = make_test_scene(101, 6, 5, 1, 1, 2);
    sc.alpha.fill(0.0);  // pure foreground
    sc.fg_motions.assign(2, AffineMotion::identity());
    sc.bg_motions.assign(2, AffineMotion::identity());
    const DenseMatrix D = dense_operator(sc, 0, BlurModelKind::Proposed);
    const int n = 30;
    REQUIRE(D.rows == n);
    REQUIRE(D.cols == 2 * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            CHECK(D.at(r, c) == doctest::Approx(0.0));              // L0 block
            CHECK(D.at(r, n + c) == doctest::Approx(r == c ? 1.0 : 0.0));  // L1 block
        }
}

TEST_CASE("dense operator matches the matrix-free render") {
    for (const auto kind : {BlurModelKind::Proposed, BlurModelKind::Conventional}) {
        const Scene sc = make_test_scene(102, 8, 8, 1, 2, 3);
        const DenseMatrix D = dense_operator(sc, 1, kind);
        const ImageBuffer direct = model_frame_unclamped(sc, 1, kind);
        const int n = 64;
        for (int r = 0; r < n; ++r) {
            double v = 0.0;
            for (int c = 0; c < n; ++c)
                v += D.at(r, c) * sc.background.data[c] +
                     D.at(r, n + c) * sc.foreground.data[c];
            CHECK(v == doctest::Approx(direct.data[r]).epsilon(1e-10));
        }
        // conservation: folded row sums are 1 everywhere (clamped warps)
        for (int r = 0; r < n; ++r) {
            double s = 0.0;
            for (int c = 0; c < 2 * n; ++c) s += D.at(r, c);
            CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("dense operator refuses big scenes") {
    const Scene sc = make_test_scene(103, 80, 60, 1, 1, 2);
    CHECK_THROWS_AS(dense_operator(sc, 0, BlurModelKind::Proposed), ConfigError);
}

TEST_CASE("latent operator equals the independent dense assembly") {
    for (const auto kind : {BlurModelKind::Proposed, BlurModelKind::Conventional}) {
        for (std::uint64_t seed : {201, 202, 203}) {
            const Scene sc = make_test_scene(seed, 8, 7, 1, 2, 3);
            const bool proposed = kind == BlurModelKind::Proposed;
            for (int i = 0; i < sc.frames(); ++i) {
                const oracle::LatentMatrices M = oracle::latent_matrices(sc, i, proposed);
                const Eigen::VectorXd ref = M.bg * oracle::channel_vec(sc.background, 0) +
                                            M.fg * oracle::channel_vec(sc.foreground, 0);
                const ImageBuffer got = model_frame_unclamped(sc, i, kind);
                CHECK((oracle::channel_vec(got, 0) - ref).cwiseAbs().maxCoeff() < 1e-10);

                // dense_operator agrees with the oracle entrywise
                const DenseMatrix D = dense_operator(sc, i, kind);
                double worst = 0.0;
                for (int r = 0; r < D.rows; ++r)
                    for (int c = 0; c < 56; ++c) {
                        worst = std::max(worst, std::abs(D.at(r, c) - M.bg(r, c)));
                        worst = std::max(worst, std::abs(D.at(r, 56 + c) - M.fg(r, c)));
                    }
                CHECK(worst < 1e-10);
            }
        }
    }
}

TEST_CASE("alpha operator equals the independent dense assembly") {
    for (const auto kind : {BlurModelKind::Proposed, BlurModelKind::Conventional}) {
        const Scene sc = make_test_scene(204, 7, 8, 2, 2, 3);
        const bool proposed = kind == BlurModelKind::Proposed;
        const AlphaBlurOperator op(sc, kind);
        std::mt19937_64 rng(205);
        for (int i = 0; i < sc.frames(); ++i) {
            const auto blocks = oracle::alpha_matrices(sc, i, proposed);
            const ImageBuffer a = oracle::random_image(rng, 7, 8, 1);
            const ImageBuffer got = op.apply_frame(i, a);
            const Eigen::VectorXd av = oracle::channel_vec(a, 0);
            for (int c = 0; c < 2; ++c) {
                const Eigen::VectorXd ref = blocks[c] * av;
                CHECK((oracle::channel_vec(got, c) - ref).cwiseAbs().maxCoeff() < 1e-10);
            }
            // dense_alpha_operator rows live in interleaved channel order
            const DenseMatrix D = dense_alpha_operator(sc, i, kind);
            REQUIRE(D.rows == 7 * 8 * 2);
            REQUIRE(D.cols == 7 * 8);
            double worst = 0.0;
            for (int p = 0; p < 56; ++p)
                for (int c = 0; c < 2; ++c)
                    for (int q = 0; q < 56; ++q)
                        worst = std::max(worst,
                                         std::abs(D.at(p * 2 + c, q) - blocks[c](p, q)));
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("pixel kernels are rows of the dense operator") {
    for (const auto kind : {BlurModelKind::Proposed, BlurModelKind::Conventional}) {
        const Scene sc = make_test_scene(206, 9, 6, 1, 1, 3);
        const DenseMatrix D = dense_operator(sc, 0, kind);
        for (const auto [px, py] : {std::pair{0, 0}, {4, 3}, {8, 5}}) {
            const PixelKernels k = extract_pixel_kernels(sc, 0, px, py, kind);
            const int row = py * 9 + px;
            for (int q = 0; q < 54; ++q) {
                CHECK(k.background.data[q] == doctest::Approx(D.at(row, q)).epsilon(1e-10));
                CHECK(k.foreground.data[q] == doctest::Approx(D.at(row, 54 + q)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("special model equivalence cases hold and a control case separates") {
    for (std::uint64_t seed : {1, 2}) {
        const SpecialCaseReport r = check_special_cases(seed);
        CHECK(r.static_background < 1e-6);
        CHECK(r.static_foreground < 1e-6);
        CHECK(r.homogeneous_background < 1e-6);
    }

    // both layers moving over a textured background: the models disagree
    const Scene sc = make_test_scene(301, 32, 24, 1, 2, 4);
    double gap = 0.0;
    for (int i = 0; i < sc.frames(); ++i)
        gap = std::max(gap, max_abs_diff(model_frame_unclamped(sc, i, BlurModelKind::Proposed),
                                         model_frame_unclamped(sc, i, BlurModelKind::Conventional)));
    CHECK(gap > 1e-3);
}

TEST_CASE("fence counterexample separates the models visibly") {
    const char* txt = R"({
        "width": 48, "height": 32, "frames": 2,
        "foreground": {"type": "constant", "value": 0.95},
        "background": {"type": "checkerboard", "period": 3, "low": 0.05, "high": 0.85},
        "mask": {"type": "fence", "period": 12, "bar_width": 5},
        "fg_motion": {"type": "linear", "velocity": [-6, 0]},
        "bg_motion": {"type": "linear", "velocity": [6, 0]},
        "duty_cycle": 1.0, "samples": 6
    })";
    const SceneScript s = SceneScript::from_json_text(txt);
    const RenderedSequence prop = render_sequence(s, BlurModelKind::Proposed);
    const RenderedSequence conv = render_sequence(s, BlurModelKind::Conventional);
    double gap = 0.0;
    for (std::size_t i = 0; i < prop.frames.size(); ++i)
        gap = std::max(gap, max_abs_diff(prop.frames[i], conv.frames[i]));
    CHECK(gap > 0.05);
}

TEST_CASE("make_test_scene produces valid normalized scenes") {
    const Scene sc = make_test_scene(99, 14, 11, 3, 3, 4);
    CHECK_NOTHROW(sc.validate());
    CHECK(sc.alpha.min_value() >= 0.0);
    CHECK(sc.alpha.max_value() <= 1.0);
    CHECK(sc.foreground.min_value() >= 0.0);
    CHECK(sc.background.max_value() <= 1.0);
    CHECK(sc.timing.frames == 3);
    // different seeds give different scenes
    CHECK(max_abs_diff(make_test_scene(100, 14, 11, 3, 3, 4).background, sc.background) > 0.0);
}

TEST_CASE("script load reads from disk") {
    const auto path = temp_file("lbd_script.json");
    {
        std::ofstream out(path);
        out << small_script_json();
    }
    const SceneScript s = SceneScript::load(path.string());
    CHECK(s.width == 24);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(SceneScript::load("/nonexistent/script.json"), IoError);
}
