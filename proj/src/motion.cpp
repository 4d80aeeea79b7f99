#include "lbd/motion.hpp"

#include <string>

namespace lbd {

AffineMotion AffineMotion::inverse() const {
    const double d = det();
    if (std::abs(d) < 1e-12)
        throw InvalidMotionError("AffineMotion::inverse: singular matrix (det=" +
                                 std::to_string(d) + ")");
    AffineMotion m;
    m.a11 = a22 / d;
    m.a12 = -a12 / d;
    m.a21 = -a21 / d;
    m.a22 = a11 / d;
    m.tx = -(m.a11 * tx + m.a12 * ty);
    m.ty = -(m.a21 * tx + m.a22 * ty);
    return m;
}

AffineMotion AffineMotion::compose(const AffineMotion& other) const {
    AffineMotion m;
    m.a11 = a11 * other.a11 + a12 * other.a21;
    m.a12 = a11 * other.a12 + a12 * other.a22;
    m.a21 = a21 * other.a11 + a22 * other.a21;
    m.a22 = a21 * other.a12 + a22 * other.a22;
    m.tx = a11 * other.tx + a12 * other.ty + tx;
    m.ty = a21 * other.tx + a22 * other.ty + ty;
    return m;
}

bool nearly_equal(const AffineMotion& a, const AffineMotion& b, double tol) {
    return std::abs(a.a11 - b.a11) <= tol && std::abs(a.a12 - b.a12) <= tol &&
           std::abs(a.a21 - b.a21) <= tol && std::abs(a.a22 - b.a22) <= tol &&
           std::abs(a.tx - b.tx) <= tol && std::abs(a.ty - b.ty) <= tol;
}

AffineMotion interpolate_motion(const AffineMotion& cur, const AffineMotion& next, double t_frac,
                                double duty_cycle) {
    if (t_frac < 0.0 || t_frac > 1.0)
        throw InvalidMotionError("interpolate_motion: t_frac outside [0,1]");
    const double s = t_frac * duty_cycle;
    AffineMotion m;
    m.a11 = cur.a11 + s * (next.a11 - cur.a11);
    m.a12 = cur.a12 + s * (next.a12 - cur.a12);
    m.a21 = cur.a21 + s * (next.a21 - cur.a21);
    m.a22 = cur.a22 + s * (next.a22 - cur.a22);
    m.tx = cur.tx + s * (next.tx - cur.tx);
    m.ty = cur.ty + s * (next.ty - cur.ty);
    return m;
}

void CaptureTiming::validate() const {
    if (duty_cycle <= 0.0 || duty_cycle > 1.0)
        throw ConfigError("CaptureTiming: duty_cycle must lie in (0,1]");
    if (samples < 2) throw ConfigError("CaptureTiming: need at least 2 samples per exposure");
    if (frames < 1) throw ConfigError("CaptureTiming: need at least 1 frame");
}

}  // namespace lbd
