#include "lbd/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "lbd/pyramid.hpp"
#include "lbd/warp.hpp"

namespace lbd {

namespace {

void central_gradients(const ImageBuffer& img, ImageBuffer& gx, ImageBuffer& gy) {
    gx = ImageBuffer(img.width, img.height, 1);
    gy = ImageBuffer(img.width, img.height, 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, img.width - 1);
            const int ym = std::max(y - 1, 0), yp = std::min(y + 1, img.height - 1);
            gx.at(x, y) = 0.5 * (img.at(xp, y) - img.at(xm, y));
            gy.at(x, y) = 0.5 * (img.at(x, yp) - img.at(x, ym));
        }
}

// 3x3 median, clamped at the borders; suppresses lone bad LK solves without
// smearing motion boundaries
ImageBuffer median3(const ImageBuffer& img) {
    ImageBuffer out(img.width, img.height, 1);
    double vals[9];
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::clamp(x + dx, 0, img.width - 1);
                    const int yy = std::clamp(y + dy, 0, img.height - 1);
                    vals[n++] = img.at(xx, yy);
                }
            std::nth_element(vals, vals + 4, vals + 9);
            out.at(x, y) = vals[4];
        }
    return out;
}

// b sampled at p + flow(p), clamped bilinear.
ImageBuffer warp_by_flow(const ImageBuffer& b, const ImageBuffer& u, const ImageBuffer& v) {
    ImageBuffer out(b.width, b.height, 1);
    for (int y = 0; y < b.height; ++y)
        for (int x = 0; x < b.width; ++x) {
            const BilinearTaps t =
                bilinear_taps(x + u.at(x, y), y + v.at(x, y), b.width, b.height);
            double s = 0.0;
            for (int i = 0; i < 4; ++i) s += t.w[i] * b.at(t.x[i], t.y[i]);
            out.at(x, y) = s;
        }
    return out;
}

}  // namespace

FlowField compute_flow(const ImageBuffer& a, const ImageBuffer& b, const FlowConfig& config) {
    require_same_shape(a, b, "compute_flow");
    const ImageBuffer ga = to_gray(a), gb = to_gray(b);
    const auto levels =
        pyramid_levels(a.width, a.height, config.pyramid_scale, config.min_level_size);

    FlowField flow;
    flow.u = ImageBuffer(levels.back().width, levels.back().height, 1);
    flow.v = ImageBuffer(levels.back().width, levels.back().height, 1);

    for (int li = static_cast<int>(levels.size()) - 1; li >= 0; --li) {
        const int w = levels[li].width, h = levels[li].height;
        const ImageBuffer la = resize_bilinear(ga, w, h);
        const ImageBuffer lb = resize_bilinear(gb, w, h);
        if (flow.u.width != w || flow.u.height != h) {
            const double sx = static_cast<double>(w) / flow.u.width;
            const double sy = static_cast<double>(h) / flow.u.height;
            flow.u = resize_bilinear(flow.u, w, h);
            flow.v = resize_bilinear(flow.v, w, h);
            for (double& d : flow.u.data) d *= sx;
            for (double& d : flow.v.data) d *= sy;
        }

        ImageBuffer ix, iy;
        central_gradients(la, ix, iy);
        const int r = config.window_radius;
        for (int pass = 0; pass < config.warp_iterations; ++pass) {
            const ImageBuffer wb = warp_by_flow(lb, flow.u, flow.v);
            ImageBuffer du(w, h, 1), dv(w, h, 1);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    double gxx = 0, gxy = 0, gyy = 0, bx = 0, by = 0;
                    for (int dy = -r; dy <= r; ++dy)
                        for (int dx = -r; dx <= r; ++dx) {
                            const int xx = x + dx, yy = y + dy;
                            if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
                            const double cx = ix.at(xx, yy), cy = iy.at(xx, yy);
                            const double it = wb.at(xx, yy) - la.at(xx, yy);
                            gxx += cx * cx;
                            gxy += cx * cy;
                            gyy += cy * cy;
                            bx -= cx * it;
                            by -= cy * it;
                        }
                    const double det = gxx * gyy - gxy * gxy;
                    const double lambda_min =
                        0.5 * (gxx + gyy - std::sqrt((gxx - gyy) * (gxx - gyy) + 4 * gxy * gxy));
                    if (lambda_min > config.min_eigenvalue && det > 0.0) {
                        du.at(x, y) = (gyy * bx - gxy * by) / det;
                        dv.at(x, y) = (gxx * by - gxy * bx) / det;
                    }
                }
            // cap the per-pass update so outliers cannot explode coarse levels
            for (std::size_t i = 0; i < du.data.size(); ++i) {
                flow.u.data[i] += std::clamp(du.data[i], -2.0, 2.0);
                flow.v.data[i] += std::clamp(dv.data[i], -2.0, 2.0);
            }
            flow.u = median3(flow.u);
            flow.v = median3(flow.v);
        }
    }
    return flow;
}

FlowField load_flow(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open flow file '" + path + "'");
    std::uint32_t w = 0, h = 0;
    in.read(reinterpret_cast<char*>(&w), 4);
    in.read(reinterpret_cast<char*>(&h), 4);
    if (!in || w == 0 || h == 0 || w > 1u << 20 || h > 1u << 20)
        throw IoError("bad flow header in '" + path + "'");
    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<float> plane(n);
    FlowField f;
    f.u = ImageBuffer(static_cast<int>(w), static_cast<int>(h), 1);
    f.v = ImageBuffer(static_cast<int>(w), static_cast<int>(h), 1);
    in.read(reinterpret_cast<char*>(plane.data()), static_cast<std::streamsize>(n * 4));
    if (!in) throw IoError("truncated flow file '" + path + "'");
    for (std::size_t i = 0; i < n; ++i) f.u.data[i] = plane[i];
    in.read(reinterpret_cast<char*>(plane.data()), static_cast<std::streamsize>(n * 4));
    if (!in) throw IoError("truncated flow file '" + path + "'");
    for (std::size_t i = 0; i < n; ++i) f.v.data[i] = plane[i];
    return f;
}

void save_flow(const FlowField& flow, const std::string& path) {
    require_same_shape(flow.u, flow.v, "save_flow");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open flow file '" + path + "' for writing");
    const std::uint32_t w = static_cast<std::uint32_t>(flow.u.width);
    const std::uint32_t h = static_cast<std::uint32_t>(flow.u.height);
    out.write(reinterpret_cast<const char*>(&w), 4);
    out.write(reinterpret_cast<const char*>(&h), 4);
    std::vector<float> plane(flow.u.data.size());
    for (const ImageBuffer* p : {&flow.u, &flow.v}) {
        for (std::size_t i = 0; i < p->data.size(); ++i) plane[i] = static_cast<float>(p->data[i]);
        out.write(reinterpret_cast<const char*>(plane.data()),
                  static_cast<std::streamsize>(plane.size() * 4));
    }
    if (!out) throw IoError("failed writing flow file '" + path + "'");
}

}  // namespace lbd
