#pragma once
// Shared property suite for the anisotropy derivative bounds (used by the
// unit tests and by the acceptance runner). Constants are estimated
// empirically over fixed deterministic samples.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "anisoac/anisotropy.hpp"
#include "oracles.hpp"

namespace lemma_suite {

using anisoac::AnisotropySpec;
using anisoac::Vec;

// log-uniform magnitudes so the near-origin regime |p| ~ sqrt(delta) is hit
inline std::vector<Vec<2>> sample_points(int n, unsigned seed, double log10_lo = -6.0,
                                         double log10_hi = 1.0) {
    auto g = oracle::rng(seed);
    std::vector<Vec<2>> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double r = std::pow(10.0, oracle::uniform(g, log10_lo, log10_hi));
        const double a = oracle::uniform(g, 0.0, 2.0 * M_PI);
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return pts;
}

struct MonotonicityResult {
    std::map<double, double> c0_per_delta;  // min (A'(p)-A'(q)).(p-q)/|p-q|^2
    double c0_min = 0.0;
    double c0_max = 0.0;
};

// Pairs (p, p + r e) with |p| log-uniform over many decades and r much
// smaller than |p|, so the quotient probes the worst local direction rather
// than a segment average; the wide radius range keeps the estimate comparable
// across delta (far from the origin the regularization is negligible).
inline std::vector<std::pair<Vec<2>, Vec<2>>> sample_pairs(int n, unsigned seed) {
    auto g = oracle::rng(seed);
    std::vector<std::pair<Vec<2>, Vec<2>>> pairs;
    pairs.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double r = std::pow(10.0, oracle::uniform(g, -6.0, 3.0));
        const double a = oracle::uniform(g, 0.0, 2.0 * M_PI);
        const Vec<2> p{r * std::cos(a), r * std::sin(a)};
        const double step = std::max(r * std::pow(10.0, oracle::uniform(g, -4.0, -1.0)), 1e-8);
        const double b = oracle::uniform(g, 0.0, 2.0 * M_PI);
        Vec<2> q = p;
        q[0] += step * std::cos(b);
        q[1] += step * std::sin(b);
        pairs.emplace_back(p, q);
    }
    return pairs;
}

inline MonotonicityResult strong_monotonicity(const AnisotropySpec<2>& base,
                                              const std::vector<double>& deltas, int n_pairs,
                                              unsigned seed) {
    const auto pairs = sample_pairs(n_pairs, seed);
    MonotonicityResult res;
    res.c0_min = 1e300;
    res.c0_max = -1e300;
    for (double delta : deltas) {
        const AnisotropySpec<2> a = base.with_delta(delta);
        double c0 = 1e300;
        for (const auto& [p, q] : pairs) {
            Vec<2> d = p;
            anisoac::add_scaled(d, -1.0, q);
            const double dn2 = anisoac::dot(d, d);
            if (dn2 < 1e-16) continue;
            Vec<2> dg = a.grad(p);
            anisoac::add_scaled(dg, -1.0, a.grad(q));
            c0 = std::min(c0, anisoac::dot(dg, d) / dn2);
        }
        res.c0_per_delta[delta] = c0;
        res.c0_min = std::min(res.c0_min, c0);
        res.c0_max = std::max(res.c0_max, c0);
    }
    return res;
}

inline double lipschitz_constant(const AnisotropySpec<2>& base, const std::vector<double>& deltas,
                                 int n_pairs, unsigned seed) {
    const auto ps = sample_points(n_pairs, seed);
    const auto qs = sample_points(n_pairs, seed + 1);
    double c = 0.0;
    for (double delta : deltas) {
        const AnisotropySpec<2> a = base.with_delta(delta);
        for (int i = 0; i < n_pairs; ++i) {
            Vec<2> d = ps[i];
            anisoac::add_scaled(d, -1.0, qs[i]);
            const double dn = anisoac::norm(d);
            if (dn < 1e-12) continue;
            Vec<2> dg = a.grad(ps[i]);
            anisoac::add_scaled(dg, -1.0, a.grad(qs[i]));
            c = std::max(c, anisoac::norm(dg) / dn);
        }
    }
    return c;
}

struct HoelderResult {
    std::vector<double> deltas;
    std::vector<double> sup_diff;  // sup_p |A'_delta(p) - A'(p)|
    double exponent = 0.0;         // fitted slope of log(sup) vs log(delta)
    double constant = 0.0;         // max sup/sqrt(delta)
};

inline HoelderResult hoelder_half(const AnisotropySpec<2>& base, const std::vector<double>& deltas,
                                  int n_points, unsigned seed) {
    const auto ps = sample_points(n_points, seed, -7.0, 1.0);
    const AnisotropySpec<2> a0 = base.with_delta(0.0);
    HoelderResult res;
    for (double delta : deltas) {
        const AnisotropySpec<2> ad = base.with_delta(delta);
        double sup = 0.0;
        for (const auto& p : ps) {
            Vec<2> d = ad.grad(p);
            anisoac::add_scaled(d, -1.0, a0.grad(p));
            sup = std::max(sup, anisoac::norm(d));
        }
        res.deltas.push_back(delta);
        res.sup_diff.push_back(sup);
        res.constant = std::max(res.constant, sup / std::sqrt(delta));
    }
    res.exponent = oracle::loglog_slope(res.deltas, res.sup_diff);
    return res;
}

struct EigenBounds {
    double lambda_min = 1e300;
    double lambda_max = 0.0;
    double max_asymmetry = 0.0;
};

inline EigenBounds hessian_eigen_bounds(const AnisotropySpec<2>& base,
                                        const std::vector<double>& deltas, int n_points,
                                        unsigned seed) {
    auto pts = sample_points(n_points, seed);
    pts.push_back({0.0, 0.0});
    EigenBounds b;
    for (double delta : deltas) {
        if (delta <= 0.0) continue;  // bounds are claimed for delta > 0
        const AnisotropySpec<2> a = base.with_delta(delta);
        for (const auto& p : pts) {
            const auto h = a.hess(p);
            b.max_asymmetry = std::max(b.max_asymmetry, std::abs(h[0][1] - h[1][0]));
            const auto [lo, hi] = oracle::sym_eigs(h);
            b.lambda_min = std::min(b.lambda_min, lo);
            b.lambda_max = std::max(b.lambda_max, hi);
        }
    }
    return b;
}

}  // namespace lemma_suite
