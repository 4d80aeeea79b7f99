#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "lbd/errors.hpp"

namespace lbd {

struct NelderMeadResult {
    std::vector<double> best;
    double value = 0.0;
    int evals = 0;
};

// Downhill simplex with the classic coefficients (reflect 1, expand 2,
// contract 0.5, shrink 0.5). Stops when the evaluation budget is spent.
inline NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<std::vector<double>> simplex, int max_evals) {
    if (simplex.empty()) throw ConfigError("nelder_mead: empty simplex");
    const std::size_t n = simplex[0].size();
    if (simplex.size() != n + 1) throw ConfigError("nelder_mead: need n+1 vertices");

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    std::vector<double> fv(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        if (evals >= max_evals && i > 0) {
            fv[i] = fv[0];  // budget exhausted during setup; duplicate worstish
            simplex[i] = simplex[0];
            continue;
        }
        fv[i] = eval(simplex[i]);
    }

    auto order = [&]() {
        std::vector<std::size_t> idx(simplex.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return fv[a] < fv[b];
        });
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            f2.push_back(fv[i]);
        }
        simplex.swap(s2);
        fv.swap(f2);
    };
    order();

    while (evals < max_evals) {
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coef * (centroid[j] - simplex[n][j]);
            return x;
        };

        const std::vector<double> xr = blend(1.0);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            if (evals < max_evals) {
                const std::vector<double> xe = blend(2.0);
                const double fe = eval(xe);
                if (fe < fr) {
                    simplex[n] = xe;
                    fv[n] = fe;
                } else {
                    simplex[n] = xr;
                    fv[n] = fr;
                }
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            const std::vector<double> xc = blend(outside ? 0.5 : -0.5);
            if (evals >= max_evals) break;
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    if (evals >= max_evals) break;
                    fv[i] = eval(simplex[i]);
                }
            }
        }
        order();
    }

    NelderMeadResult res;
    res.best = simplex[0];
    res.value = fv[0];
    res.evals = evals;
    return res;
}

}  // namespace lbd
