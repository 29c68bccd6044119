#pragma once
// Discrete linearized-state, adjoint and additional-adjoint sweeps plus the
// reduced gradient (lambda u + p)/eps and Hessian action (lambda du + dp)/eps.
// All returned fields are L2(Q) function representatives: pairings happen in
// the weighted inner product sum_j tau_j v_j^T M w_j.

#include <utility>
#include <vector>

#include "anisoac/state.hpp"

namespace anisoac {

// Frozen-state step operators, assembled once per outer iterate with the same
// routine the Newton solver uses, then reused for every sweep.
inline std::vector<SparseOperator> assemble_step_operators(const ProblemSpec& spec,
                                                           const Trajectory& y,
                                                           const SolverParams& params = {}) {
    std::vector<SparseOperator> ops;
    ops.reserve(spec.grid.n());
    for (int j = 0; j < spec.grid.n(); ++j)
        ops.push_back(assemble_step_operator(*spec.disc, spec.aniso, spec.epsilon,
                                             spec.grid.tau(j), y.fields[j], params.delta_jac));
    return ops;
}

namespace detail {

inline void solve_step(const SparseOperator& op, const DVec& rhs, DVec& x,
                       const SolverParams& params, int j) {
    try {
        pcg_solve(op, rhs, x, params.cg_tol_sensitivity, params.cg_max_iter);
    } catch (const PcgError& e) {
        throw SolverError(std::string("sensitivity solve failed: ") + e.what(), j, e.residual);
    }
}

}  // namespace detail

// z_j solves L_j z_j = M v_j + (eps/tau_j) M z_{j-1}, z_0 = 0.
inline Trajectory linearized_solve(const ProblemSpec& spec, const std::vector<SparseOperator>& ops,
                                   const Trajectory& v, const SolverParams& params = {}) {
    const Discretization& d = *spec.disc;
    Trajectory z = Trajectory::zeros(spec.grid, spec.n_nodes());
    NodalField rhs(spec.n_nodes());
    for (int j = 0; j < spec.grid.n(); ++j) {
        d.mass.apply(v.fields[j], rhs);
        if (j > 0) {
            NodalField carry = d.mass.apply(z.fields[j - 1]);
            axpy(rhs, spec.epsilon / spec.grid.tau(j), carry);
            z.fields[j] = z.fields[j - 1];  // warm start
        }
        detail::solve_step(ops[j], rhs, z.fields[j], params, j);
    }
    return z;
}

// Backward sweep L_j p_j = (eps/tau_j) M p_{j+1} with p_{N+1} = y_N - y_target.
inline Trajectory adjoint_solve(const ProblemSpec& spec, const std::vector<SparseOperator>& ops,
                                const Trajectory& y, const SolverParams& params = {}) {
    const Discretization& d = *spec.disc;
    Trajectory p = Trajectory::zeros(spec.grid, spec.n_nodes());
    NodalField terminal = y.fields.back();
    axpy(terminal, -1.0, spec.y_target);
    const NodalField* next = &terminal;
    NodalField rhs(spec.n_nodes());
    for (int j = spec.grid.n() - 1; j >= 0; --j) {
        d.mass.apply(*next, rhs);
        scale(rhs, spec.epsilon / spec.grid.tau(j));
        if (j < spec.grid.n() - 1) p.fields[j] = p.fields[j + 1];  // warm start
        detail::solve_step(ops[j], rhs, p.fields[j], params, j);
        next = &p.fields[j];
    }
    return p;
}

// Backward sweep for dp with the two second-order source terms
//   T1[i] = sum_e area (grad phi_i)^T A'''(grad y)[., grad z] grad p
//   T2[i] = int psi'''(y) z p phi_i
// and terminal datum dp_{N+1} = dy_N.
inline Trajectory additional_adjoint_solve(const ProblemSpec& spec,
                                           const std::vector<SparseOperator>& ops,
                                           const Trajectory& y, const Trajectory& p,
                                           const Trajectory& z, const NodalField& dy_terminal,
                                           const SolverParams& params = {}) {
    if (spec.aniso.delta() <= 0.0 && spec.aniso.count() > 1)
        throw SolverError("additional adjoint needs delta > 0 (A''' unbounded near grad y = 0)",
                          -1, 0.0);
    const Discretization& d = *spec.disc;
    const bool quadratic = spec.aniso.count() == 1;  // A''' vanishes identically
    Trajectory dp = Trajectory::zeros(spec.grid, spec.n_nodes());
    const NodalField* next = &dy_terminal;
    NodalField rhs(spec.n_nodes());
    NodalField t2(spec.n_nodes());
    for (int j = spec.grid.n() - 1; j >= 0; --j) {
        d.mass.apply(*next, rhs);
        scale(rhs, spec.epsilon / spec.grid.tau(j));
        if (!quadratic) {
            for (const Triangle& t : d.mesh.elements()) {
                const Mat<2> m = spec.aniso.third_apply(d.mesh.element_gradient(t, y.fields[j]),
                                                        d.mesh.element_gradient(t, z.fields[j]));
                const Vec<2> w = matvec(m, d.mesh.element_gradient(t, p.fields[j]));
                for (int a = 0; a < 3; ++a)
                    rhs[t.nodes[a]] -= spec.epsilon * t.area * dot(t.grad[a], w);
            }
        }
        assemble_potential_third(d.mesh, y.fields[j], z.fields[j], &p.fields[j], t2);
        axpy(rhs, -1.0 / spec.epsilon, t2);
        if (j < spec.grid.n() - 1) dp.fields[j] = dp.fields[j + 1];  // warm start
        detail::solve_step(ops[j], rhs, dp.fields[j], params, j);
        next = &dp.fields[j];
    }
    return dp;
}

// Everything the outer loop needs at one control iterate.
struct Iterate {
    Trajectory u;
    Trajectory y;
    CostBreakdown cost;
    // filled by prepare_derivatives:
    std::vector<SparseOperator> ops;
    Trajectory adjoint;
    Trajectory gradient;  // (lambda u + p)/eps
    double gradient_norm = 0.0;
    bool derivatives_ready = false;
};

class ReducedFunctional {
public:
    ReducedFunctional(const ProblemSpec& spec, SolverParams params = {})
        : spec_(spec), params_(params) {}

    const ProblemSpec& spec() const { return spec_; }
    const SolverParams& params() const { return params_; }

    double inner(const Trajectory& a, const Trajectory& b) const {
        return spec_.disc->l2q_inner(a, b);
    }
    double norm(const Trajectory& a) const { return spec_.disc->l2q_norm(a); }

    Iterate evaluate(Trajectory u) const {
        Iterate it;
        it.y = forward_solve(spec_, u, params_);
        it.cost = cost(spec_, it.y, u);
        it.u = std::move(u);
        return it;
    }

    void prepare_derivatives(Iterate& it) const {
        if (it.derivatives_ready) return;
        it.ops = assemble_step_operators(spec_, it.y, params_);
        it.adjoint = adjoint_solve(spec_, it.ops, it.y, params_);
        it.gradient = it.u;
        scale(it.gradient, spec_.lambda);
        axpy(it.gradient, 1.0, it.adjoint);
        scale(it.gradient, 1.0 / spec_.epsilon);
        it.gradient_norm = norm(it.gradient);
        it.derivatives_ready = true;
    }

    // H du = (lambda du + dp)/eps via linearized state + additional adjoint.
    Trajectory hessian_apply(const Iterate& it, const Trajectory& du) const {
        Trajectory z = linearized_solve(spec_, it.ops, du, params_);
        Trajectory dp = additional_adjoint_solve(spec_, it.ops, it.y, it.adjoint, z,
                                                 z.fields.back(), params_);
        Trajectory h = du;
        scale(h, spec_.lambda);
        axpy(h, 1.0, dp);
        scale(h, 1.0 / spec_.epsilon);
        return h;
    }

private:
    const ProblemSpec& spec_;
    SolverParams params_;
};

// Convenience wrapper matching the reduced-gradient contract directly.
inline Trajectory reduced_gradient(const ProblemSpec& spec, const Trajectory& u,
                                   const SolverParams& params = {}) {
    ReducedFunctional f(spec, params);
    Iterate it = f.evaluate(u);
    f.prepare_derivatives(it);
    return it.gradient;
}

}  // namespace anisoac
