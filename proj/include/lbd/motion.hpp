#pragma once

#include <cmath>

#include "lbd/errors.hpp"

namespace lbd {

// 2D affine map p -> A p + t. Motions attached to a frame map that frame's
// coordinates into the reference frame.
struct AffineMotion {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;
    double tx = 0.0, ty = 0.0;

    static AffineMotion identity() { return {}; }
    static AffineMotion translation(double dx, double dy) {
        AffineMotion m;
        m.tx = dx;
        m.ty = dy;
        return m;
    }

    void apply(double x, double y, double& ox, double& oy) const {
        ox = a11 * x + a12 * y + tx;
        oy = a21 * x + a22 * y + ty;
    }

    double det() const { return a11 * a22 - a12 * a21; }

    // Throws InvalidMotionError when |det| is (near) zero.
    AffineMotion inverse() const;

    // this(other(p)): apply `other` first, then this.
    AffineMotion compose(const AffineMotion& other) const;

    bool is_identity(double tol = 0.0) const {
        return std::abs(a11 - 1.0) <= tol && std::abs(a12) <= tol && std::abs(a21) <= tol &&
               std::abs(a22 - 1.0) <= tol && std::abs(tx) <= tol && std::abs(ty) <= tol;
    }
};

bool nearly_equal(const AffineMotion& a, const AffineMotion& b, double tol = 1e-12);

// Intra-exposure motion at normalized time t_frac in [0,1]: component-wise
// interpolation from `cur` toward `next`, scaled by the shutter duty cycle.
AffineMotion interpolate_motion(const AffineMotion& cur, const AffineMotion& next, double t_frac,
                                double duty_cycle);

// Shutter/sampling description shared by synthesis and solving.
struct CaptureTiming {
    double duty_cycle = 0.5;  // open fraction of the frame interval
    int samples = 2;          // M, sub-exposure sample count; >= 2 when explicit
    int frames = 0;           // N, number of observed frames

    void validate() const;
};

// Normalized time of sample k (0-based) of M: k/M. The exposure covers
// [0, duty_cycle) of the inter-frame interval, handled by interpolate_motion.
inline double sample_time_fraction(int k, int samples) {
    return static_cast<double>(k) / samples;
}

}  // namespace lbd
