#pragma once
// Trust-region Newton on the reduced functional over control trajectories.
// The quadratic subproblem min <g,s> + 1/2 <s,Hs> s.t. |s| <= radius is solved
// by Steihaug-CG; every pairing uses the weighted L2(Q) inner product supplied
// by the caller, which is what keeps iteration counts mesh-independent.

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisoac/sensitivity.hpp"

namespace anisoac {

enum class SteihaugTermination { interior, boundary, neg_curvature, max_iterations };

inline const char* to_string(SteihaugTermination k) {
    switch (k) {
        case SteihaugTermination::interior: return "interior";
        case SteihaugTermination::boundary: return "boundary";
        case SteihaugTermination::neg_curvature: return "neg_curvature";
        default: return "max_iter";
    }
}

template <class V>
struct SteihaugResult {
    V step;
    int iterations = 0;
    SteihaugTermination kind = SteihaugTermination::interior;
    double model_decrease = 0.0;  // m(0) - m(step) >= 0
    double step_norm = 0.0;
};

// grad: model gradient at s = 0. hess_apply(v) -> H v. inner: the space's
// inner product. V needs zero_like / axpy / scale free functions.
template <class V, class Apply, class Inner>
SteihaugResult<V> steihaug_solve(const V& grad, Apply&& hess_apply, Inner&& inner, double radius,
                                 double rel_tol, int max_iter) {
    SteihaugResult<V> res{zero_like(grad)};
    const double gnorm2 = inner(grad, grad);
    if (!std::isfinite(gnorm2)) throw std::runtime_error("steihaug: non-finite gradient pairing");
    if (gnorm2 == 0.0) return res;
    const double gnorm = std::sqrt(gnorm2);

    V s = zero_like(grad);
    V hs = zero_like(grad);  // running H s
    V r = grad;              // model gradient at s
    V d = grad;
    scale(d, -1.0);
    double rr = gnorm2;
    double s_norm2 = 0.0;

    auto boundary_sigma = [&](const V& dir) {
        const double sd = inner(s, dir);
        const double dd = inner(dir, dir);
        return (-sd + std::sqrt(sd * sd + dd * (radius * radius - s_norm2))) / dd;
    };

    res.kind = SteihaugTermination::max_iterations;
    for (int it = 1; it <= max_iter; ++it) {
        res.iterations = it;
        V hd = hess_apply(d);
        const double dhd = inner(d, hd);
        if (!std::isfinite(dhd)) throw std::runtime_error("steihaug: non-finite curvature pairing");
        if (dhd <= 0.0) {
            const double sigma = boundary_sigma(d);
            axpy(s, sigma, d);
            axpy(hs, sigma, hd);
            res.kind = SteihaugTermination::neg_curvature;
            break;
        }
        const double alpha = rr / dhd;
        const double sd = inner(s, d);
        const double dd = inner(d, d);
        const double trial_norm2 = s_norm2 + 2.0 * alpha * sd + alpha * alpha * dd;
        if (trial_norm2 >= radius * radius) {
            const double sigma = boundary_sigma(d);
            axpy(s, sigma, d);
            axpy(hs, sigma, hd);
            res.kind = SteihaugTermination::boundary;
            break;
        }
        axpy(s, alpha, d);
        axpy(hs, alpha, hd);
        s_norm2 = trial_norm2;
        axpy(r, alpha, hd);
        const double rr_new = inner(r, r);
        if (std::sqrt(rr_new) <= rel_tol * gnorm) {
            res.kind = SteihaugTermination::interior;
            break;
        }
        scale(d, rr_new / rr);
        axpy(d, -1.0, r);
        rr = rr_new;
    }
    res.step = std::move(s);
    res.step_norm = std::sqrt(inner(res.step, res.step));
    res.model_decrease = -(inner(grad, res.step) + 0.5 * inner(res.step, hs));
    return res;
}

struct TrustRegionConfig {
    double initial_radius = 1.0;
    double max_radius = 1e3;
    double eta_accept = 0.1;
    double eta_expand = 0.75;
    double shrink = 0.25;
    double expand = 2.0;
    // Weighted-gradient-norm target relative to iterate 0; the model-exhaustion
    // stop below terminates earlier when inner tolerances make this unreachable.
    double gtol_rel = 1e-13;
    double gtol_abs = 0.0;
    int max_outer = 200;
    double cg_rel_tol = 1e-6;  // the six-orders residual-reduction criterion
    int cg_max_iter = 400;
    int max_consecutive_failures = 8;
    double min_radius = 1e-14;

    void validate() const {
        if (!(0.0 < eta_accept && eta_accept < eta_expand && eta_expand < 1.0))
            throw std::invalid_argument("trust region thresholds need 0 < eta1 < eta2 < 1");
        if (!(shrink > 0.0 && shrink < 1.0 && expand > 1.0))
            throw std::invalid_argument("trust region factors need shrink in (0,1), expand > 1");
        if (initial_radius <= 0.0 || max_radius < initial_radius)
            throw std::invalid_argument("bad trust region radii");
    }
};

struct TrustRegionIteration {
    int iter;
    double j, j1, j2;
    double gradient_norm;
    double radius;
    int cg_iterations;
    double step_norm;
    bool accepted;
    SteihaugTermination cg_kind;
};

struct TrustRegionReport {
    std::vector<TrustRegionIteration> iterations;
    int tr_steps = 0;        // outer iterations performed
    int accepted_steps = 0;
    int max_cg = 0;
    double mean_cg = 0.0;    // over CG solves that reached the residual criterion
    double wall_time_s = 0.0;
    double final_j = 0.0, final_j1 = 0.0, final_j2 = 0.0;
    double final_gradient_norm = 0.0;
    std::string termination;
};

struct MinimizeResult {
    Trajectory control;
    TrustRegionReport report;
    bool failed = false;
};

inline MinimizeResult minimize(const ProblemSpec& spec, const Trajectory& u0,
                               const TrustRegionConfig& config, const SolverParams& params = {}) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();
    ReducedFunctional f(spec, params);
    TrustRegionReport rep;
    auto finish = [&](Iterate& it, const std::string& why, bool failed) {
        rep.termination = why;
        rep.final_j = it.cost.j;
        rep.final_j1 = it.cost.j1;
        rep.final_j2 = it.cost.j2;
        rep.final_gradient_norm = it.derivatives_ready ? it.gradient_norm : -1.0;
        rep.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return MinimizeResult{std::move(it.u), std::move(rep), failed};
    };

    Iterate current = f.evaluate(u0);
    f.prepare_derivatives(current);
    const double g0 = current.gradient_norm;
    const double gtol = std::max(config.gtol_abs, config.gtol_rel * g0);
    double radius = config.initial_radius;
    int consecutive_failures = 0;
    long interior_solves = 0;
    double interior_cg_sum = 0.0;

    while (true) {
        if (current.gradient_norm <= gtol) return finish(current, "gtol", false);
        if (rep.tr_steps >= config.max_outer) return finish(current, "max_outer", false);
        if (radius < config.min_radius) return finish(current, "radius_collapse", false);
        ++rep.tr_steps;
        const double radius_used = radius;

        auto sub = steihaug_solve(
            current.gradient, [&](const Trajectory& v) { return f.hessian_apply(current, v); },
            [&](const Trajectory& a, const Trajectory& b) { return f.inner(a, b); }, radius,
            config.cg_rel_tol, config.cg_max_iter);
        rep.max_cg = std::max(rep.max_cg, sub.iterations);
        // predicted decrease below roundoff of j: no digits left to gain
        if (sub.model_decrease <= 1e-15 * (1.0 + std::abs(current.cost.j))) {
            --rep.tr_steps;
            return finish(current, "model_exhausted", false);
        }
        if (sub.kind == SteihaugTermination::interior) {
            ++interior_solves;
            interior_cg_sum += sub.iterations;
        }

        Trajectory trial_u = current.u;
        axpy(trial_u, 1.0, sub.step);
        bool accepted = false;
        double trial_j = current.cost.j;
        Iterate trial;
        bool evaluated = false;
        try {
            trial = f.evaluate(std::move(trial_u));
            evaluated = true;
            consecutive_failures = 0;
            trial_j = trial.cost.j;
            const double actual = current.cost.j - trial.cost.j;
            const double predicted = sub.model_decrease;
            if (predicted > 0.0 && actual / predicted >= config.eta_accept) accepted = true;
            if (accepted) {
                if (actual / predicted >= config.eta_expand && sub.step_norm >= 0.99 * radius)
                    radius = std::min(config.expand * radius, config.max_radius);
            } else {
                radius *= config.shrink;
            }
        } catch (const SolverError&) {
            ++consecutive_failures;
            radius *= config.shrink;
            if (consecutive_failures > config.max_consecutive_failures)
                return finish(current, "solver_failure", true);
        }

        rep.iterations.push_back({rep.tr_steps, evaluated ? trial_j : current.cost.j,
                                  evaluated ? trial.cost.j1 : current.cost.j1,
                                  evaluated ? trial.cost.j2 : current.cost.j2,
                                  current.gradient_norm, radius_used, sub.iterations,
                                  sub.step_norm, accepted, sub.kind});
        if (accepted) {
            ++rep.accepted_steps;
            current = std::move(trial);
            f.prepare_derivatives(current);
        }
        rep.mean_cg = interior_solves > 0 ? interior_cg_sum / interior_solves : 0.0;
    }
}

}  // namespace anisoac
