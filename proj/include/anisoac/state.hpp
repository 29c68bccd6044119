#pragma once
// Implicit dG(0) time stepping of the anisotropic Allen-Cahn state equation.
// Each step solves F(y) = 0 with a damped Newton method; the Jacobian is the
// same operator that later drives the linearized/adjoint solves.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "anisoac/pcg.hpp"
#include "anisoac/problem.hpp"

namespace anisoac {

struct SolverParams {
    double newton_tol = 1e-9;
    int newton_max_iter = 30;
    int max_halvings = 8;
    double armijo = 1e-4;
    double cg_tol_forward = 1e-10;
    double cg_tol_sensitivity = 1e-12;
    int cg_max_iter = 20000;
    // Jacobian regularization for delta = 0 runs: the residual keeps the exact
    // A' (with A'(0) = 0), only the Newton operator substitutes A''_{delta_jac},
    // so the converged solution solves the true delta = 0 equations.
    double delta_jac = 1e-12;
};

class SolverError : public std::runtime_error {
public:
    SolverError(std::string msg, int step_index, double residual)
        : std::runtime_error(std::move(msg)), step_index(step_index), residual(residual) {}
    int step_index;  // failing time step (0-based), -1 if not step-related
    double residual;
};

// L = (eps/tau) M + eps K_{A''(grad y)} + (1/eps) M_{psi''(y)}
inline SparseOperator assemble_step_operator(const Discretization& disc,
                                             const AnisotropySpec<2>& aniso, double epsilon,
                                             double tau, const NodalField& y,
                                             double delta_jac = 1e-12) {
    const AnisotropySpec<2> haniso = aniso.delta() > 0.0 ? aniso : aniso.with_delta(delta_jac);
    SparseOperator op(disc.pattern);
    op.add_scaled_values(epsilon / tau, disc.mass);
    const double inv_eps = 1.0 / epsilon;
    for (const Triangle& t : disc.mesh.elements()) {
        const Mat<2> h = haniso.hess(disc.mesh.element_gradient(t, y));
        std::array<Vec<2>, 3> hg;
        for (int b = 0; b < 3; ++b) hg[b] = matvec(h, t.grad[b]);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                op.add(t.nodes[a], t.nodes[b], epsilon * t.area * dot(t.grad[a], hg[b]));
        for (const TriQuadPoint& q : triangle_quadrature()) {
            double yq = 0.0;
            for (int a = 0; a < 3; ++a) yq += q.bary[a] * y[t.nodes[a]];
            const double w = inv_eps * t.area * q.weight * DoubleWell::d2(yq);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    op.add(t.nodes[a], t.nodes[b], w * q.bary[a] * q.bary[b]);
        }
    }
    return op;
}

// F(y) = (eps/tau) M (y - y_prev) + eps Q(y) + (1/eps) P'(y) - M u
inline NodalField residual(const ProblemSpec& spec, const NodalField& y, const NodalField& y_prev,
                           const NodalField& u, double tau) {
    const Discretization& d = *spec.disc;
    NodalField diff = y;
    axpy(diff, -1.0, y_prev);
    NodalField r = d.mass.apply(diff);
    scale(r, spec.epsilon / tau);
    NodalField q = apply_quasilinear_term(d.mesh, spec.aniso, y);
    axpy(r, spec.epsilon, q);
    NodalField p = assemble_potential_gradient(d.mesh, y);
    axpy(r, 1.0 / spec.epsilon, p);
    NodalField mu = d.mass.apply(u);
    axpy(r, -1.0, mu);
    return r;
}

struct NewtonStats {
    int iterations = 0;
    double residual = 0.0;
};

inline NodalField newton_step_solve(const ProblemSpec& spec, const NodalField& y_prev,
                                    const NodalField& u, double tau, const SolverParams& params,
                                    int step_index = -1, NewtonStats* stats = nullptr) {
    const Discretization& d = *spec.disc;
    NodalField y = y_prev;
    const double rhs_scale = 1.0 + norm(d.mass.apply(u));
    NodalField r = residual(spec, y, y_prev, u, tau);
    double rnorm = norm(r);
    int it = 0;
    while (rnorm > params.newton_tol * rhs_scale) {
        if (++it > params.newton_max_iter)
            throw SolverError("newton: no convergence (residual " + std::to_string(rnorm) + ")",
                              step_index, rnorm);
        SparseOperator jac;
        try {
            jac = assemble_step_operator(d, spec.aniso, spec.epsilon, tau, y, params.delta_jac);
        } catch (const std::domain_error& e) {
            throw SolverError(std::string("newton: jacobian assembly failed: ") + e.what(),
                              step_index, rnorm);
        }
        NodalField dir(y.size(), 0.0);
        NodalField neg_r = r;
        scale(neg_r, -1.0);
        try {
            pcg_solve(jac, neg_r, dir, params.cg_tol_forward, params.cg_max_iter);
        } catch (const PcgError& e) {
            if (e.kind == PcgError::Kind::indefinite)
                throw SolverError("newton: jacobian not positive definite", step_index, rnorm);
            throw SolverError(std::string("newton: inner solve failed: ") + e.what(), step_index,
                              rnorm);
        }
        double sigma = 1.0;
        NodalField y_trial = y;
        axpy(y_trial, sigma, dir);
        NodalField r_trial = residual(spec, y_trial, y_prev, u, tau);
        double rnorm_trial = norm(r_trial);
        for (int halving = 0;
             rnorm_trial > (1.0 - params.armijo * sigma) * rnorm && halving < params.max_halvings;
             ++halving) {
            sigma *= 0.5;
            y_trial = y;
            axpy(y_trial, sigma, dir);
            r_trial = residual(spec, y_trial, y_prev, u, tau);
            rnorm_trial = norm(r_trial);
        }
        y = std::move(y_trial);
        r = std::move(r_trial);
        rnorm = rnorm_trial;
    }
    if (stats) *stats = {it, rnorm};
    return y;
}

struct StepDiagnostics {
    int step;
    double t;
    int newton_iters;
    double residual;
    double energy;
};

// sum_e area A(grad y|_e) -- exact for P1.
inline double anisotropic_energy(const StructuredTriMesh& mesh, const AnisotropySpec<2>& aniso,
                                 const NodalField& y) {
    CompensatedSum s;
    for (const Triangle& t : mesh.elements())
        s.add(t.area * aniso.value(mesh.element_gradient(t, y)));
    return s.sum;
}

// E(y) = eps sum_e area A(grad y) + (1/eps) int psi(y)
inline double energy(const ProblemSpec& spec, const NodalField& y) {
    return spec.epsilon * anisotropic_energy(spec.disc->mesh, spec.aniso, y) +
           integrate_potential(spec.disc->mesh, y) / spec.epsilon;
}

inline Trajectory forward_solve(const ProblemSpec& spec, const Trajectory& u,
                                const SolverParams& params = {},
                                const std::function<void(const StepDiagnostics&)>& on_step = {}) {
    Trajectory y{spec.grid, {}};
    y.fields.reserve(spec.grid.n());
    const NodalField* prev = &spec.y0;
    for (int j = 0; j < spec.grid.n(); ++j) {
        NewtonStats stats;
        try {
            y.fields.push_back(
                newton_step_solve(spec, *prev, u.fields[j], spec.grid.tau(j), params, j, &stats));
        } catch (SolverError& e) {
            throw SolverError(std::string(e.what()) + " at step " + std::to_string(j), j,
                              e.residual);
        }
        prev = &y.fields.back();
        if (on_step)
            on_step({j, spec.grid.time(j), stats.iterations, stats.residual, energy(spec, *prev)});
    }
    return y;
}

struct CostBreakdown {
    double j = 0.0;
    double j1 = 0.0;  // 1/2 ||y_N - y_target||^2
    double j2 = 0.0;  // lambda/(2 eps) ||u||^2_{L2(Q)}
};

inline CostBreakdown cost(const ProblemSpec& spec, const Trajectory& y, const Trajectory& u) {
    const Discretization& d = *spec.disc;
    NodalField diff = y.fields.back();
    axpy(diff, -1.0, spec.y_target);
    CostBreakdown c;
    c.j1 = 0.5 * dot(diff, d.mass.apply(diff));
    const double un = d.l2q_norm(u);
    c.j2 = spec.lambda / (2.0 * spec.epsilon) * un * un;
    c.j = c.j1 + c.j2;
    return c;
}

}  // namespace anisoac
