#pragma once

#include <vector>

#include "lbd/errors.hpp"

namespace lbd {

// Tabulated proximal operator of the hyper-Laplacian penalty:
//   prox(v) = argmin_w  (beta/2) (w - v)^2 + |w|^q,   0 < q < 1.
//
// The minimizer is 0 below an input threshold v* and jumps to w* there; the
// table stores exact solutions on a uniform grid over [0,1] and evaluation
// interpolates linearly, except across the jump where the two branches are
// kept separate. Odd in v; inputs are clamped to [-1,1] (gradients of [0,1]
// images cannot exceed that).
class ProxLut {
public:
    ProxLut(double beta, double q = 0.8, int size = 1024);

    double operator()(double v) const;

    double beta() const { return beta_; }
    double exponent() const { return q_; }
    // Threshold v* below which prox == 0, and the branch value w* = prox(v*).
    double jump_input() const { return v_star_; }
    double jump_value() const { return w_star_; }

private:
    double beta_, q_;
    double v_star_, w_star_;
    double step_;
    std::vector<double> table_;
};

}  // namespace lbd
