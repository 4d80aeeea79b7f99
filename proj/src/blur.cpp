#include "lbd/blur.hpp"

#include <cmath>
#include <string>

namespace lbd {

WarpPlan::WarpPlan(const AffineMotion& motion, int w, int h) : width(w), height(h) {
    taps.reserve(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double fx, fy;
            motion.apply(x, y, fx, fy);
            taps.push_back(bilinear_taps(fx, fy, w, h));
        }
}

void WarpPlan::apply(const ImageBuffer& src, ImageBuffer& out) const {
    if (out.width != width || out.height != height || out.channels != src.channels)
        out = ImageBuffer(width, height, src.channels);
    std::size_t p = 0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x, ++p) {
            const BilinearTaps& t = taps[p];
            for (int c = 0; c < src.channels; ++c) {
                double v = 0.0;
                for (int i = 0; i < 4; ++i) v += t.w[i] * src.at(t.x[i], t.y[i], c);
                out.at(x, y, c) = v;
            }
        }
}

void WarpPlan::apply_add(const ImageBuffer& src, ImageBuffer& out, double scale) const {
    std::size_t p = 0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x, ++p) {
            const BilinearTaps& t = taps[p];
            for (int c = 0; c < src.channels; ++c) {
                double v = 0.0;
                for (int i = 0; i < 4; ++i) v += t.w[i] * src.at(t.x[i], t.y[i], c);
                out.at(x, y, c) += scale * v;
            }
        }
}

void WarpPlan::adjoint_add(const ImageBuffer& r, ImageBuffer& out, double scale) const {
    std::size_t p = 0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x, ++p) {
            const BilinearTaps& t = taps[p];
            for (int c = 0; c < r.channels; ++c) {
                const double v = scale * r.at(x, y, c);
                for (int i = 0; i < 4; ++i) out.at(t.x[i], t.y[i], c) += t.w[i] * v;
            }
        }
}

std::vector<AffineMotion> exposure_motions(const std::vector<AffineMotion>& traj, int frame,
                                           const CaptureTiming& timing) {
    timing.validate();
    if (traj.size() != static_cast<std::size_t>(timing.frames) + 1)
        throw ShapeError("exposure_motions: trajectory must have frames+1 entries, got " +
                         std::to_string(traj.size()));
    if (frame < 0 || frame >= timing.frames)
        throw IndexError("exposure_motions: frame " + std::to_string(frame) + " out of range");
    std::vector<AffineMotion> out;
    out.reserve(timing.samples);
    for (int k = 0; k < timing.samples; ++k)
        out.push_back(interpolate_motion(traj[frame], traj[frame + 1],
                                         sample_time_fraction(k, timing.samples),
                                         timing.duty_cycle));
    return out;
}

ImageBuffer composite(const ImageBuffer& foreground, const ImageBuffer& background,
                      const ImageBuffer& alpha) {
    require_same_shape(foreground, background, "composite");
    if (alpha.channels != 1 || alpha.width != foreground.width ||
        alpha.height != foreground.height)
        throw ShapeError("composite: alpha must be single-channel and match the layers");
    ImageBuffer out(foreground.width, foreground.height, foreground.channels);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            const double a = alpha.at(x, y);
            for (int c = 0; c < out.channels; ++c)
                out.at(x, y, c) = (1.0 - a) * foreground.at(x, y, c) + a * background.at(x, y, c);
        }
    return out;
}

int auto_sample_count(const std::vector<AffineMotion>& fg_motions,
                      const std::vector<AffineMotion>& bg_motions, const CaptureTiming& timing,
                      int width, int height) {
    const double cx[4] = {0.0, static_cast<double>(width - 1), 0.0,
                          static_cast<double>(width - 1)};
    const double cy[4] = {0.0, 0.0, static_cast<double>(height - 1),
                          static_cast<double>(height - 1)};
    double max_disp = 0.0;
    for (const auto* traj : {&fg_motions, &bg_motions}) {
        for (int i = 0; i + 1 < static_cast<int>(traj->size()); ++i) {
            const AffineMotion& start = (*traj)[i];
            const AffineMotion end =
                interpolate_motion((*traj)[i], (*traj)[i + 1], 1.0, timing.duty_cycle);
            for (int c = 0; c < 4; ++c) {
                double x0, y0, x1, y1;
                start.apply(cx[c], cy[c], x0, y0);
                end.apply(cx[c], cy[c], x1, y1);
                max_disp = std::max(max_disp, std::hypot(x1 - x0, y1 - y0));
            }
        }
    }
    int m = static_cast<int>(std::ceil(max_disp));
    return std::clamp(m, 2, 30);
}

void Scene::validate() const {
    timing.validate();
    require_same_shape(foreground, background, "Scene layers");
    if (alpha.channels != 1) throw ShapeError("Scene: alpha must be single-channel");
    if (alpha.width != foreground.width || alpha.height != foreground.height)
        throw ShapeError("Scene: alpha size differs from the layers");
    const std::size_t want = static_cast<std::size_t>(timing.frames) + 1;
    if (fg_motions.size() != want || bg_motions.size() != want)
        throw ConfigError("Scene: each trajectory needs frames+1 motions");
}

namespace {

ImageBuffer one_minus(const ImageBuffer& a) {
    ImageBuffer out = a;
    for (double& v : out.data) v = 1.0 - v;
    return out;
}

// x * m with a single-channel mask broadcast over x's channels.
ImageBuffer masked(const ImageBuffer& x, const ImageBuffer& mask) {
    ImageBuffer out = x;
    for (int y = 0; y < x.height; ++y)
        for (int xx = 0; xx < x.width; ++xx) {
            const double m = mask.at(xx, y);
            for (int c = 0; c < x.channels; ++c) out.at(xx, y, c) *= m;
        }
    return out;
}

void masked_add(const ImageBuffer& x, const ImageBuffer& mask, ImageBuffer& out, double scale) {
    for (int y = 0; y < x.height; ++y)
        for (int xx = 0; xx < x.width; ++xx) {
            const double m = scale * mask.at(xx, y);
            for (int c = 0; c < x.channels; ++c) out.at(xx, y, c) += m * x.at(xx, y, c);
        }
}

}  // namespace

LatentBlurOperator::LatentBlurOperator(const Scene& scene, BlurModelKind kind) : kind_(kind) {
    scene.validate();
    samples_ = scene.timing.samples;
    one_minus_alpha_ = one_minus(scene.alpha);
    const int w = scene.width(), h = scene.height(), n = scene.frames();
    fg_plans_.resize(n);
    bg_plans_.resize(n);
    warped_alpha_.resize(n);
    avg_warped_alpha_.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto fg_m = exposure_motions(scene.fg_motions, i, scene.timing);
        const auto bg_m = exposure_motions(scene.bg_motions, i, scene.timing);
        ImageBuffer avg(w, h, 1);
        for (int k = 0; k < samples_; ++k) {
            fg_plans_[i].emplace_back(fg_m[k], w, h);
            bg_plans_[i].emplace_back(bg_m[k], w, h);
            ImageBuffer wa(w, h, 1);
            fg_plans_[i][k].apply(scene.alpha, wa);
            axpy(1.0 / samples_, wa, avg);
            warped_alpha_[i].push_back(std::move(wa));
        }
        avg_warped_alpha_[i] = std::move(avg);
    }
}

ImageBuffer LatentBlurOperator::apply_frame(int frame, const ImageBuffer& background,
                                            const ImageBuffer& foreground) const {
    if (frame < 0 || frame >= frames())
        throw IndexError("LatentBlurOperator: frame out of range");
    require_same_shape(background, foreground, "LatentBlurOperator::apply_frame");
    const int w = background.width, h = background.height, ch = background.channels;
    ImageBuffer out(w, h, ch);
    const double inv_m = 1.0 / samples_;
    const ImageBuffer fg_visible = masked(foreground, one_minus_alpha_);
    if (kind_ == BlurModelKind::Proposed) {
        ImageBuffer wbg(w, h, ch);
        for (int k = 0; k < samples_; ++k) {
            fg_plans_[frame][k].apply_add(fg_visible, out, inv_m);
            bg_plans_[frame][k].apply(background, wbg);
            masked_add(wbg, warped_alpha_[frame][k], out, inv_m);
        }
    } else {
        ImageBuffer kbg(w, h, ch);  // K0 L0
        for (int k = 0; k < samples_; ++k) {
            fg_plans_[frame][k].apply_add(fg_visible, out, inv_m);
            bg_plans_[frame][k].apply_add(background, kbg, inv_m);
        }
        masked_add(kbg, avg_warped_alpha_[frame], out, 1.0);
    }
    return out;
}

void LatentBlurOperator::adjoint_frame_add(int frame, const ImageBuffer& residual,
                                           ImageBuffer& into_background,
                                           ImageBuffer& into_foreground) const {
    if (frame < 0 || frame >= frames())
        throw IndexError("LatentBlurOperator: frame out of range");
    const int w = residual.width, h = residual.height, ch = residual.channels;
    const double inv_m = 1.0 / samples_;
    ImageBuffer fg_acc(w, h, ch);
    if (kind_ == BlurModelKind::Proposed) {
        for (int k = 0; k < samples_; ++k) {
            fg_plans_[frame][k].adjoint_add(residual, fg_acc, inv_m);
            const ImageBuffer mr = masked(residual, warped_alpha_[frame][k]);
            bg_plans_[frame][k].adjoint_add(mr, into_background, inv_m);
        }
    } else {
        const ImageBuffer mr = masked(residual, avg_warped_alpha_[frame]);
        for (int k = 0; k < samples_; ++k) {
            fg_plans_[frame][k].adjoint_add(residual, fg_acc, inv_m);
            bg_plans_[frame][k].adjoint_add(mr, into_background, inv_m);
        }
    }
    masked_add(fg_acc, one_minus_alpha_, into_foreground, 1.0);
}

AlphaBlurOperator::AlphaBlurOperator(const Scene& scene, BlurModelKind kind) : kind_(kind) {
    scene.validate();
    foreground_ = scene.foreground;
    const int w = scene.width(), h = scene.height(), n = scene.frames();
    const int m = scene.timing.samples;
    fg_plans_.resize(n);
    warped_bg_.resize(n);
    mean_warped_bg_.resize(n);
    mean_warped_fg_.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto fg_m = exposure_motions(scene.fg_motions, i, scene.timing);
        const auto bg_m = exposure_motions(scene.bg_motions, i, scene.timing);
        ImageBuffer mean_fg(w, h, scene.channels());
        ImageBuffer mean_bg(w, h, scene.channels());
        for (int k = 0; k < m; ++k) {
            fg_plans_[i].emplace_back(fg_m[k], w, h);
            fg_plans_[i][k].apply_add(scene.foreground, mean_fg, 1.0 / m);
            WarpPlan bg_plan(bg_m[k], w, h);
            ImageBuffer wbg(w, h, scene.channels());
            bg_plan.apply(scene.background, wbg);
            axpy(1.0 / m, wbg, mean_bg);
            warped_bg_[i].push_back(std::move(wbg));
        }
        mean_warped_fg_[i] = std::move(mean_fg);
        mean_warped_bg_[i] = std::move(mean_bg);
    }
}

ImageBuffer AlphaBlurOperator::apply_frame(int frame, const ImageBuffer& alpha) const {
    if (frame < 0 || frame >= frames()) throw IndexError("AlphaBlurOperator: frame out of range");
    const int w = foreground_.width, h = foreground_.height, ch = foreground_.channels;
    const int m = static_cast<int>(fg_plans_[frame].size());
    const double inv_m = 1.0 / m;
    ImageBuffer out(w, h, ch);
    ImageBuffer wa(w, h, 1);
    if (kind_ == BlurModelKind::Proposed) {
        for (int k = 0; k < m; ++k) {
            // occluding term: (W0 L0) * (W1 a)
            fg_plans_[frame][k].apply(alpha, wa);
            masked_add(warped_bg_[frame][k], wa, out, inv_m);
            // transmitted foreground removed: -W1(a * L1)
            fg_plans_[frame][k].apply_add(masked(foreground_, alpha), out, -inv_m);
        }
    } else {
        ImageBuffer mean_wa(w, h, 1);
        const ImageBuffer af = masked(foreground_, alpha);
        for (int k = 0; k < m; ++k) {
            fg_plans_[frame][k].apply_add(alpha, mean_wa, inv_m);
            fg_plans_[frame][k].apply_add(af, out, -inv_m);
        }
        masked_add(mean_warped_bg_[frame], mean_wa, out, 1.0);
    }
    return out;
}

ImageBuffer AlphaBlurOperator::adjoint_frame(int frame, const ImageBuffer& residual) const {
    if (frame < 0 || frame >= frames()) throw IndexError("AlphaBlurOperator: frame out of range");
    const int w = foreground_.width, h = foreground_.height, ch = foreground_.channels;
    const int m = static_cast<int>(fg_plans_[frame].size());
    const double inv_m = 1.0 / m;
    ImageBuffer out(w, h, 1);
    ImageBuffer weighted(w, h, ch);
    auto collapse = [&](const ImageBuffer& occl, const ImageBuffer& trans) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double s = 0.0;
                for (int c = 0; c < ch; ++c)
                    s += occl.at(x, y, c) - foreground_.at(x, y, c) * trans.at(x, y, c);
                out.at(x, y) += s;
            }
    };
    if (kind_ == BlurModelKind::Proposed) {
        for (int k = 0; k < m; ++k) {
            // W1^T((W0 L0) * r) - L1 * (W1^T r), collapsed over channels
            weighted = residual;
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    for (int c = 0; c < ch; ++c)
                        weighted.at(x, y, c) *= warped_bg_[frame][k].at(x, y, c);
            ImageBuffer occl(w, h, ch), trans(w, h, ch);
            fg_plans_[frame][k].adjoint_add(weighted, occl, inv_m);
            fg_plans_[frame][k].adjoint_add(residual, trans, inv_m);
            collapse(occl, trans);
        }
    } else {
        weighted = residual;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int c = 0; c < ch; ++c)
                    weighted.at(x, y, c) *= mean_warped_bg_[frame].at(x, y, c);
        ImageBuffer occl(w, h, ch), trans(w, h, ch);
        for (int k = 0; k < m; ++k) {
            fg_plans_[frame][k].adjoint_add(weighted, occl, inv_m);
            fg_plans_[frame][k].adjoint_add(residual, trans, inv_m);
        }
        collapse(occl, trans);
    }
    return out;
}

ImageBuffer AlphaBlurOperator::constant_term(int frame, const ImageBuffer& observed) const {
    if (frame < 0 || frame >= frames()) throw IndexError("AlphaBlurOperator: frame out of range");
    return subtract(observed, mean_warped_fg_[frame]);
}

ImageBuffer render_blurred_frame(const Scene& scene, int frame, BlurModelKind kind) {
    LatentBlurOperator op(scene, kind);
    ImageBuffer out = op.apply_frame(frame, scene.background, scene.foreground);
    out.clamp01();
    return out;
}

BlurModelKind parse_model_kind(const std::string& name) {
    if (name == "proposed") return BlurModelKind::Proposed;
    if (name == "conventional") return BlurModelKind::Conventional;
    throw ConfigError("unknown blur model '" + name + "' (expected proposed|conventional)");
}

const char* model_kind_name(BlurModelKind kind) {
    return kind == BlurModelKind::Proposed ? "proposed" : "conventional";
}

}  // namespace lbd
