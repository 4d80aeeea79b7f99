#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lbd/blur.hpp"
#include "lbd/gradient.hpp"
#include "lbd/kernels.hpp"
#include "lbd/pipeline.hpp"
#include "lbd/png_io.hpp"
#include "lbd/synth.hpp"

namespace py = pybind11;
using namespace lbd;

namespace {

py::array_t<double> to_numpy(const ImageBuffer& img) {
    if (img.channels == 1) {
        py::array_t<double> arr({img.height, img.width});
        std::copy(img.data.begin(), img.data.end(), arr.mutable_data());
        return arr;
    }
    py::array_t<double> arr({img.height, img.width, img.channels});
    std::copy(img.data.begin(), img.data.end(), arr.mutable_data());
    return arr;
}

ImageBuffer from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() == 2) {
        ImageBuffer img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)), 1);
        std::copy(arr.data(), arr.data() + arr.size(), img.data.begin());
        return img;
    }
    if (arr.ndim() == 3) {
        ImageBuffer img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)),
                        static_cast<int>(arr.shape(2)));
        std::copy(arr.data(), arr.data() + arr.size(), img.data.begin());
        return img;
    }
    throw ShapeError("expected a 2d or 3d array");
}

AffineMotion motion_from_seq(const std::vector<double>& v) {
    if (v.size() != 6) throw ConfigError("motion must have 6 entries");
    AffineMotion m;
    m.a11 = v[0];
    m.a12 = v[1];
    m.a21 = v[2];
    m.a22 = v[3];
    m.tx = v[4];
    m.ty = v[5];
    return m;
}

std::vector<double> motion_to_seq(const AffineMotion& m) {
    return {m.a11, m.a12, m.a21, m.a22, m.tx, m.ty};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "occlusion-aware layered blur model and deblurring";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    py::enum_<BlurModelKind>(m, "BlurModel")
        .value("proposed", BlurModelKind::Proposed)
        .value("conventional", BlurModelKind::Conventional);

    py::class_<CaptureTiming>(m, "CaptureTiming")
        .def(py::init<>())
        .def_readwrite("duty_cycle", &CaptureTiming::duty_cycle)
        .def_readwrite("samples", &CaptureTiming::samples)
        .def_readwrite("frames", &CaptureTiming::frames);

    py::class_<Scene>(m, "Scene")
        .def(py::init<>())
        .def_property(
            "foreground", [](const Scene& s) { return to_numpy(s.foreground); },
            [](Scene& s, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
                s.foreground = from_numpy(a);
            })
        .def_property(
            "background", [](const Scene& s) { return to_numpy(s.background); },
            [](Scene& s, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
                s.background = from_numpy(a);
            })
        .def_property(
            "alpha", [](const Scene& s) { return to_numpy(s.alpha); },
            [](Scene& s, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
                s.alpha = from_numpy(a);
            })
        .def_property(
            "fg_motions",
            [](const Scene& s) {
                std::vector<std::vector<double>> out;
                for (const auto& mo : s.fg_motions) out.push_back(motion_to_seq(mo));
                return out;
            },
            [](Scene& s, const std::vector<std::vector<double>>& v) {
                s.fg_motions.clear();
                for (const auto& e : v) s.fg_motions.push_back(motion_from_seq(e));
            })
        .def_property(
            "bg_motions",
            [](const Scene& s) {
                std::vector<std::vector<double>> out;
                for (const auto& mo : s.bg_motions) out.push_back(motion_to_seq(mo));
                return out;
            },
            [](Scene& s, const std::vector<std::vector<double>>& v) {
                s.bg_motions.clear();
                for (const auto& e : v) s.bg_motions.push_back(motion_from_seq(e));
            })
        .def_readwrite("timing", &Scene::timing)
        .def("validate", &Scene::validate);

    py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
        .def_readonly("data_term", &EnergyBreakdown::data_term)
        .def_readonly("layer_prior", &EnergyBreakdown::layer_prior)
        .def_readonly("alpha_tv", &EnergyBreakdown::alpha_tv)
        .def_readonly("alpha_binary", &EnergyBreakdown::alpha_binary)
        .def_readonly("total", &EnergyBreakdown::total);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("lambda1", &SolverConfig::lambda1)
        .def_readwrite("lambda2", &SolverConfig::lambda2)
        .def_readwrite("lambda3", &SolverConfig::lambda3)
        .def_readwrite("beta_schedule", &SolverConfig::beta_schedule)
        .def_readwrite("cg_max_iter", &SolverConfig::cg_max_iter)
        .def_readwrite("pd_iterations", &SolverConfig::pd_iterations)
        .def_readwrite("nm_max_evals", &SolverConfig::nm_max_evals)
        .def_readwrite("inner_iterations", &SolverConfig::inner_iterations);

    py::class_<Metrics>(m, "Metrics")
        .def_readonly("background_psnr", &Metrics::background_psnr)
        .def_readonly("foreground_psnr", &Metrics::foreground_psnr)
        .def_readonly("alpha_mae", &Metrics::alpha_mae)
        .def_readonly("bg_translation_error", &Metrics::bg_translation_error)
        .def_readonly("fg_translation_error", &Metrics::fg_translation_error);

    m.def("warp_affine",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img,
             const std::vector<double>& motion) {
              return to_numpy(warp_affine(from_numpy(img), motion_from_seq(motion)));
          },
          py::arg("image"), py::arg("motion"));
    m.def("warp_adjoint",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img,
             const std::vector<double>& motion) {
              return to_numpy(warp_adjoint(from_numpy(img), motion_from_seq(motion)));
          },
          py::arg("image"), py::arg("motion"));
    m.def("image_gradient",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img) {
              ImageBuffer gx, gy;
              image_gradient(from_numpy(img), gx, gy);
              return py::make_tuple(to_numpy(gx), to_numpy(gy));
          },
          py::arg("image"));
    m.def("composite",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& fg,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& bg,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& alpha) {
              return to_numpy(composite(from_numpy(fg), from_numpy(bg), from_numpy(alpha)));
          },
          py::arg("foreground"), py::arg("background"), py::arg("alpha"));

    m.def("render_blurred_frame",
          [](const Scene& scene, int frame, BlurModelKind kind) {
              return to_numpy(render_blurred_frame(scene, frame, kind));
          },
          py::arg("scene"), py::arg("frame"), py::arg("model") = BlurModelKind::Proposed);

    m.def("extract_pixel_kernels",
          [](const Scene& scene, int frame, int px, int py_, BlurModelKind kind) {
              const PixelKernels k = extract_pixel_kernels(scene, frame, px, py_, kind);
              return py::make_tuple(to_numpy(k.foreground), to_numpy(k.background));
          },
          py::arg("scene"), py::arg("frame"), py::arg("px"), py::arg("py"),
          py::arg("model") = BlurModelKind::Proposed);

    m.def("render_sequence",
          [](const std::string& script_json, BlurModelKind kind) {
              const RenderedSequence seq =
                  render_sequence(SceneScript::from_json_text(script_json), kind);
              std::vector<py::array_t<double>> frames;
              for (const auto& f : seq.frames) frames.push_back(to_numpy(f));
              return py::make_tuple(frames, seq.truth);
          },
          py::arg("script_json"), py::arg("model") = BlurModelKind::Proposed,
          "renders a scene script (JSON text); returns (frames, truth_scene)");

    m.def("objective",
          [](const Scene& scene, const std::vector<py::array_t<double>>& frames,
             const SolverConfig& cfg, BlurModelKind kind) {
              std::vector<ImageBuffer> f;
              for (const auto& a : frames) f.push_back(from_numpy(a));
              return objective(scene, f, cfg, kind);
          },
          py::arg("scene"), py::arg("frames"), py::arg("config") = SolverConfig{},
          py::arg("model") = BlurModelKind::Proposed);

    m.def("alternate",
          [](Scene& scene, const std::vector<py::array_t<double>>& frames,
             const SolverConfig& cfg, BlurModelKind kind) {
              std::vector<ImageBuffer> f;
              for (const auto& a : frames) f.push_back(from_numpy(a));
              const auto trace = alternate(scene, f, cfg, kind);
              std::vector<py::tuple> out;
              for (const auto& t : trace) out.push_back(py::make_tuple(t.step, t.energy));
              return out;
          },
          py::arg("scene"), py::arg("frames"), py::arg("config") = SolverConfig{},
          py::arg("model") = BlurModelKind::Proposed);

    m.def("deblur",
          [](const std::vector<py::array_t<double>>& frames, const std::string& config_json,
             std::optional<Scene> gt_init) {
              const RunConfig cfg = config_json.empty() ? RunConfig()
                                                        : RunConfig::from_json_text(config_json);
              std::vector<ImageBuffer> f;
              for (const auto& a : frames) f.push_back(from_numpy(a));
              const DeblurResult res = deblur_run(f, cfg, gt_init);
              return py::make_tuple(res.scene, res.init);
          },
          py::arg("frames"), py::arg("config_json") = std::string(),
          py::arg("gt_init") = std::nullopt,
          "blind deblurring; returns (scene, init_scene)");

    m.def("compute_metrics", &compute_metrics, py::arg("estimate"), py::arg("truth"));

    m.def("read_png", [](const std::string& p) { return to_numpy(read_png(p)); }, py::arg("path"));
    m.def("write_png",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img,
             const std::string& p) { write_png(from_numpy(img), p); },
          py::arg("image"), py::arg("path"));
}
