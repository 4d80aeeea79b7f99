#include "lbd/ransac.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace lbd {

namespace {

struct Correspondence {
    double x, y;    // source pixel
    double tx, ty;  // target = source + flow
    int index;      // pixel index
};

// Exact affine through 3 correspondences; false when collinear.
bool affine_from_three(const Correspondence* c, AffineMotion& out) {
    Eigen::Matrix3d S;
    S << c[0].x, c[0].y, 1.0, c[1].x, c[1].y, 1.0, c[2].x, c[2].y, 1.0;
    if (std::abs(S.determinant()) < 1e-6) return false;
    Eigen::Vector3d bx(c[0].tx, c[1].tx, c[2].tx);
    Eigen::Vector3d by(c[0].ty, c[1].ty, c[2].ty);
    const Eigen::Vector3d rx = S.colPivHouseholderQr().solve(bx);
    const Eigen::Vector3d ry = S.colPivHouseholderQr().solve(by);
    out.a11 = rx[0];
    out.a12 = rx[1];
    out.tx = rx[2];
    out.a21 = ry[0];
    out.a22 = ry[1];
    out.ty = ry[2];
    return true;
}

AffineMotion refit_least_squares(const std::vector<Correspondence>& pts,
                                 const std::vector<int>& members) {
    Eigen::MatrixXd S(members.size(), 3);
    Eigen::VectorXd bx(members.size()), by(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Correspondence& c = pts[members[i]];
        S(i, 0) = c.x;
        S(i, 1) = c.y;
        S(i, 2) = 1.0;
        bx[i] = c.tx;
        by[i] = c.ty;
    }
    const Eigen::Matrix3d N = S.transpose() * S;
    const Eigen::Vector3d rx = N.ldlt().solve(S.transpose() * bx);
    const Eigen::Vector3d ry = N.ldlt().solve(S.transpose() * by);
    AffineMotion m;
    m.a11 = rx[0];
    m.a12 = rx[1];
    m.tx = rx[2];
    m.a21 = ry[0];
    m.a22 = ry[1];
    m.ty = ry[2];
    return m;
}

double residual(const AffineMotion& m, const Correspondence& c) {
    double px, py;
    m.apply(c.x, c.y, px, py);
    return std::hypot(px - c.tx, py - c.ty);
}

// One RANSAC search over the given subset (indices into pts).
bool ransac_single(const std::vector<Correspondence>& pts, const std::vector<int>& subset,
                   const RansacConfig& cfg, std::mt19937_64& rng, AffineMotion& best_motion,
                   std::vector<int>& best_inliers) {
    if (subset.size() < 3) return false;
    std::uniform_int_distribution<std::size_t> pick(0, subset.size() - 1);
    int best_count = 0;
    AffineMotion best;
    for (int it = 0; it < cfg.iterations; ++it) {
        Correspondence sample[3];
        std::size_t ids[3];
        ids[0] = pick(rng);
        do ids[1] = pick(rng);
        while (ids[1] == ids[0]);
        do ids[2] = pick(rng);
        while (ids[2] == ids[0] || ids[2] == ids[1]);
        for (int s = 0; s < 3; ++s) sample[s] = pts[subset[ids[s]]];
        AffineMotion cand;
        if (!affine_from_three(sample, cand)) continue;
        int count = 0;
        for (int idx : subset)
            if (residual(cand, pts[idx]) <= cfg.inlier_threshold) ++count;
        if (count > best_count) {
            best_count = count;
            best = cand;
        }
    }
    if (best_count < 3) return false;
    best_inliers.clear();
    for (int idx : subset)
        if (residual(best, pts[idx]) <= cfg.inlier_threshold) best_inliers.push_back(idx);
    best_motion = refit_least_squares(pts, best_inliers);
    // refit can shift the inlier set; take the final membership
    best_inliers.clear();
    for (int idx : subset)
        if (residual(best_motion, pts[idx]) <= cfg.inlier_threshold) best_inliers.push_back(idx);
    return best_inliers.size() >= 3;
}

}  // namespace

TwoMotionFit ransac_two_affine(const FlowField& flow, const RansacConfig& config) {
    require_same_shape(flow.u, flow.v, "ransac_two_affine");
    const int w = flow.u.width, h = flow.u.height;
    const int n = w * h;
    if (n < 6) throw ShapeError("ransac_two_affine: flow field too small");
    if (config.iterations < 1 || config.inlier_threshold <= 0.0 ||
        config.min_inlier_fraction <= 0.0 || config.min_inlier_fraction >= 1.0)
        throw ConfigError("ransac_two_affine: bad config");

    std::vector<Correspondence> pts;
    pts.reserve(n);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            pts.push_back({static_cast<double>(x), static_cast<double>(y),
                           x + flow.u.at(x, y), y + flow.v.at(x, y), y * w + x});

    std::mt19937_64 rng(config.seed);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;

    AffineMotion motion_a;
    std::vector<int> inliers_a;
    if (!ransac_single(pts, all, config, rng, motion_a, inliers_a))
        throw NumericError("ransac_two_affine: no affine motion found at all");

    std::vector<char> in_a(n, 0);
    for (int idx : inliers_a) in_a[idx] = 1;
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
        if (!in_a[i]) rest.push_back(i);

    AffineMotion motion_b;
    std::vector<int> inliers_b;
    const bool got_b = ransac_single(pts, rest, config, rng, motion_b, inliers_b);
    if (!got_b ||
        inliers_b.size() < static_cast<std::size_t>(config.min_inlier_fraction * n))
        throw SingleMotionError(motion_a);

    TwoMotionFit fit;
    fit.motion_a = motion_a;
    fit.motion_b = motion_b;
    fit.labels.assign(n, MotionLabel::Outlier);
    int count_a = 0, count_b = 0;
    for (int i = 0; i < n; ++i) {
        const double ra = residual(motion_a, pts[i]);
        const double rb = residual(motion_b, pts[i]);
        if (ra <= config.inlier_threshold && ra <= rb) {
            fit.labels[i] = MotionLabel::A;
            ++count_a;
        } else if (rb <= config.inlier_threshold) {
            fit.labels[i] = MotionLabel::B;
            ++count_b;
        }
    }
    fit.inlier_fraction_a = static_cast<double>(count_a) / n;
    fit.inlier_fraction_b = static_cast<double>(count_b) / n;
    return fit;
}

}  // namespace lbd
