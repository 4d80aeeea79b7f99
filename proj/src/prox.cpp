#include "lbd/prox.hpp"

#include <algorithm>
#include <cmath>

namespace lbd {

namespace {

// Nonzero branch: the root of w + (q/beta) w^(q-1) = v on [w_star, v].
// The left side is strictly increasing there, so bisection is safe.
double solve_branch(double v, double beta, double q, double w_star) {
    double lo = w_star, hi = std::max(v, w_star);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = mid + (q / beta) * std::pow(mid, q - 1.0);
        if (g < v)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ProxLut::ProxLut(double beta, double q, int size) : beta_(beta), q_(q) {
    if (beta <= 0.0) throw ConfigError("ProxLut: beta must be positive");
    if (q <= 0.0 || q >= 1.0) throw ConfigError("ProxLut: exponent must lie in (0,1)");
    if (size < 2) throw ConfigError("ProxLut: table size must be >= 2");
    // Where the nonzero branch first ties with w = 0 (equal objective value
    // and stationarity solved jointly).
    w_star_ = std::pow(2.0 * (1.0 - q) / beta, 1.0 / (2.0 - q));
    v_star_ = w_star_ + (q / beta) * std::pow(w_star_, q - 1.0);
    step_ = 1.0 / (size - 1);
    table_.resize(size);
    for (int j = 0; j < size; ++j) {
        const double v = j * step_;
        table_[j] = v < v_star_ ? 0.0 : solve_branch(v, beta, q, w_star_);
    }
}

double ProxLut::operator()(double v) const {
    const double sign = v < 0.0 ? -1.0 : 1.0;
    double a = std::min(std::abs(v), 1.0);
    if (a < v_star_) return 0.0;
    const int last = static_cast<int>(table_.size()) - 1;
    const int j = std::min(static_cast<int>(a / step_), last - 1);
    const double v0 = j * step_, v1 = v0 + step_;
    double y0 = table_[j], x0 = v0;
    if (v_star_ > v0 && v_star_ <= v1) {
        // grid cell straddles the jump: interpolate from the branch start
        y0 = w_star_;
        x0 = v_star_;
    }
    const double t = v1 > x0 ? (a - x0) / (v1 - x0) : 0.0;
    return sign * (y0 + t * (table_[j + 1] - y0));
}

}  // namespace lbd
