#pragma once
// Jacobi-preconditioned conjugate gradients on an abstract SPD operator
// action. Failure modes (iteration budget, indefiniteness) are reported
// distinctly so callers can tell a tolerance problem from a broken operator.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "anisoac/linalg.hpp"
#include "anisoac/sparse.hpp"

namespace anisoac {

struct PcgResult {
    int iterations = 0;
    double residual = 0.0;  // final |op x - rhs| / |rhs|
};

class PcgError : public std::runtime_error {
public:
    enum class Kind { max_iterations, indefinite };
    PcgError(Kind kind, double residual, int iterations)
        : std::runtime_error(kind == Kind::indefinite
                                 ? "pcg: operator is not positive definite"
                                 : "pcg: no convergence after " + std::to_string(iterations) +
                                       " iterations (residual " + std::to_string(residual) + ")"),
          kind(kind),
          residual(residual),
          iterations(iterations) {}
    Kind kind;
    double residual;
    int iterations;
};

// Solves op x = rhs with |op x - rhs| <= rel_tol |rhs| (Euclidean norm).
// precond holds the operator diagonal; x carries the initial guess.
inline PcgResult pcg_solve(const std::function<void(const DVec&, DVec&)>& op, const DVec& precond,
                           const DVec& rhs, DVec& x, double rel_tol, int max_iter) {
    const std::size_t n = rhs.size();
    const double rhs_norm = norm(rhs);
    if (rhs_norm == 0.0) {
        set_zero(x);
        return {0, 0.0};
    }
    DVec r(n), z(n), d(n), ad(n);
    op(x, ad);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ad[i];
    double res = norm(r);
    if (res <= rel_tol * rhs_norm) return {0, res / rhs_norm};

    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / precond[i];
    d = z;
    double rz = dot(r, z);
    for (int it = 1; it <= max_iter; ++it) {
        op(d, ad);
        const double dad = dot(d, ad);
        if (dad <= 0.0) throw PcgError(PcgError::Kind::indefinite, res / rhs_norm, it);
        const double alpha = rz / dad;
        axpy(x, alpha, d);
        axpy(r, -alpha, ad);
        res = norm(r);
        if (res <= rel_tol * rhs_norm) return {it, res / rhs_norm};
        for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / precond[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
    }
    throw PcgError(PcgError::Kind::max_iterations, res / rhs_norm, max_iter);
}

inline PcgResult pcg_solve(const SparseOperator& op, const DVec& rhs, DVec& x, double rel_tol,
                           int max_iter) {
    return pcg_solve([&op](const DVec& v, DVec& out) { op.apply(v, out); }, op.diagonal(), rhs, x,
                     rel_tol, max_iter);
}

}  // namespace anisoac
