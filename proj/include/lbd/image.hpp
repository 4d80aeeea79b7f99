#pragma once

#include <cstddef>
#include <vector>

#include "lbd/errors.hpp"

namespace lbd {

// Dense row-major image, interleaved channels, double precision.
// Intensities nominally live in [0,1] but the container does not enforce that.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;

    ImageBuffer() = default;
    ImageBuffer(int w, int h, int c = 1, double fill = 0.0);

    double& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    int pixels() const { return width * height; }
    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }

    bool same_shape(const ImageBuffer& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }

    void fill(double v);
    void clamp01();
    double min_value() const;
    double max_value() const;
};

ImageBuffer constant_image(int w, int h, int c, double value);

// Throws ShapeError unless a and b agree in all dimensions.
void require_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* what);

double dot(const ImageBuffer& a, const ImageBuffer& b);
double norm2(const ImageBuffer& a);
double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b);

// y += s * x
void axpy(double s, const ImageBuffer& x, ImageBuffer& y);
// dst = a - b
ImageBuffer subtract(const ImageBuffer& a, const ImageBuffer& b);

// Rec.601 luma; single-channel input passes through as a copy.
ImageBuffer to_gray(const ImageBuffer& img);

// Center-aligned bilinear resize (clamp at the borders).
ImageBuffer resize_bilinear(const ImageBuffer& img, int new_w, int new_h);

bool all_finite(const ImageBuffer& img);

}  // namespace lbd
