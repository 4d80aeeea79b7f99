#include "lbd/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lbd {

ImageBuffer::ImageBuffer(int w, int h, int c, double fill) {
    if (w <= 0 || h <= 0 || c <= 0)
        throw ShapeError("ImageBuffer: dimensions must be positive, got " + std::to_string(w) +
                         "x" + std::to_string(h) + "x" + std::to_string(c));
    width = w;
    height = h;
    channels = c;
    data.assign(static_cast<std::size_t>(w) * h * c, fill);
}

void ImageBuffer::fill(double v) { std::fill(data.begin(), data.end(), v); }

void ImageBuffer::clamp01() {
    for (double& v : data) v = std::clamp(v, 0.0, 1.0);
}

double ImageBuffer::min_value() const {
    return data.empty() ? 0.0 : *std::min_element(data.begin(), data.end());
}

double ImageBuffer::max_value() const {
    return data.empty() ? 0.0 : *std::max_element(data.begin(), data.end());
}

ImageBuffer constant_image(int w, int h, int c, double value) {
    return ImageBuffer(w, h, c, value);
}

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(what) + ": shape mismatch (" + std::to_string(a.width) + "x" +
                         std::to_string(a.height) + "x" + std::to_string(a.channels) + " vs " +
                         std::to_string(b.width) + "x" + std::to_string(b.height) + "x" +
                         std::to_string(b.channels) + ")");
}

double dot(const ImageBuffer& a, const ImageBuffer& b) {
    require_same_shape(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

double norm2(const ImageBuffer& a) { return std::sqrt(dot(a, a)); }

double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

void axpy(double s, const ImageBuffer& x, ImageBuffer& y) {
    require_same_shape(x, y, "axpy");
    for (std::size_t i = 0; i < x.data.size(); ++i) y.data[i] += s * x.data[i];
}

ImageBuffer subtract(const ImageBuffer& a, const ImageBuffer& b) {
    require_same_shape(a, b, "subtract");
    ImageBuffer out = a;
    for (std::size_t i = 0; i < b.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

ImageBuffer to_gray(const ImageBuffer& img) {
    if (img.channels == 1) return img;
    if (img.channels != 3)
        throw ShapeError("to_gray: expected 1 or 3 channels, got " +
                         std::to_string(img.channels));
    ImageBuffer out(img.width, img.height, 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            out.at(x, y) = 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) +
                           0.114 * img.at(x, y, 2);
    return out;
}

ImageBuffer resize_bilinear(const ImageBuffer& img, int new_w, int new_h) {
    if (new_w <= 0 || new_h <= 0) throw ShapeError("resize_bilinear: target size must be positive");
    if (new_w == img.width && new_h == img.height) return img;
    ImageBuffer out(new_w, new_h, img.channels);
    const double sx = static_cast<double>(img.width) / new_w;
    const double sy = static_cast<double>(img.height) / new_h;
    for (int y = 0; y < new_h; ++y) {
        // center alignment: output pixel center maps to input pixel center
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        int y0 = static_cast<int>(std::floor(fy));
        int y1 = std::min(y0 + 1, img.height - 1);
        double wy = fy - y0;
        for (int x = 0; x < new_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            int x0 = static_cast<int>(std::floor(fx));
            int x1 = std::min(x0 + 1, img.width - 1);
            double wx = fx - x0;
            for (int c = 0; c < img.channels; ++c) {
                double top = (1.0 - wx) * img.at(x0, y0, c) + wx * img.at(x1, y0, c);
                double bot = (1.0 - wx) * img.at(x0, y1, c) + wx * img.at(x1, y1, c);
                out.at(x, y, c) = (1.0 - wy) * top + wy * bot;
            }
        }
    }
    return out;
}

bool all_finite(const ImageBuffer& img) {
    for (double v : img.data)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace lbd
