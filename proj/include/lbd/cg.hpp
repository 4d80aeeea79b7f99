#pragma once

#include <cmath>

#include "lbd/errors.hpp"
#include "lbd/image.hpp"

namespace lbd {

// Raised when <p, Ap> turns negative while the residual is still large,
// i.e. the system handed to CG is not positive semidefinite.
struct IndefiniteSystemError : NumericError {
    using NumericError::NumericError;
};

struct CgResult {
    int iterations = 0;
    double rel_residual = 0.0;
};

// Plain conjugate gradient on images, matrix-free. A must be symmetric
// positive (semi)definite; x is the warm start and carries the solution.
// Stops at rel_tol * ||b|| or max_iter. Throws NumericError on non-finite
// values and IndefiniteSystemError when the operator is not PSD.
template <class Op>
CgResult conjugate_gradient(const Op& A, const ImageBuffer& b, ImageBuffer& x, int max_iter,
                            double rel_tol) {
    const double b_norm = norm2(b);
    CgResult res;
    if (b_norm == 0.0) {
        x.fill(0.0);
        return res;
    }
    ImageBuffer r = subtract(b, A(x));
    ImageBuffer p = r;
    double rr = dot(r, r);
    res.rel_residual = std::sqrt(rr) / b_norm;
    for (int it = 0; it < max_iter; ++it) {
        if (res.rel_residual <= rel_tol) break;
        const ImageBuffer Ap = A(p);
        const double pAp = dot(p, Ap);
        if (!std::isfinite(pAp)) throw NumericError("conjugate_gradient: non-finite curvature");
        if (pAp <= 0.0) {
            // numerically converged on a semidefinite system, or truly indefinite
            if (res.rel_residual < 10.0 * rel_tol) break;
            throw IndefiniteSystemError("conjugate_gradient: system is not positive definite");
        }
        const double alpha = rr / pAp;
        axpy(alpha, p, x);
        axpy(-alpha, Ap, r);
        const double rr_new = dot(r, r);
        if (!std::isfinite(rr_new)) throw NumericError("conjugate_gradient: residual diverged");
        res.iterations = it + 1;
        res.rel_residual = std::sqrt(rr_new) / b_norm;
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < p.data.size(); ++i) p.data[i] = r.data[i] + beta * p.data[i];
    }
    return res;
}

}  // namespace lbd
