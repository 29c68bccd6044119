#pragma once
// Problem data (spatial discretization, time grid, anisotropy, cost weights)
// and the L2 / H1 / L2(Q) norms used throughout.

#include <cmath>
#include <memory>
#include <stdexcept>

#include "anisoac/anisotropy.hpp"
#include "anisoac/assembly.hpp"
#include "anisoac/timegrid.hpp"

namespace anisoac {

// Mesh plus the two fixed operators every module needs.
struct Discretization {
    explicit Discretization(int n_div)
        : mesh(n_div),
          pattern(SparsityPattern::build(mesh)),
          mass(assemble_mass(mesh, pattern)),
          laplace(assemble_laplace(mesh, pattern)) {}

    StructuredTriMesh mesh;
    std::shared_ptr<const SparsityPattern> pattern;
    SparseOperator mass;
    SparseOperator laplace;

    double l2_norm(const NodalField& f) const { return std::sqrt(dot(f, mass.apply(f))); }
    double h1_seminorm(const NodalField& f) const { return std::sqrt(dot(f, laplace.apply(f))); }
    double h1_norm(const NodalField& f) const {
        return std::sqrt(dot(f, mass.apply(f)) + dot(f, laplace.apply(f)));
    }
    // ||.||_{L2(Q)} = sqrt(sum_j tau_j ||.||_{L2(Omega)}^2)
    double l2q_norm(const Trajectory& t) const {
        double s = 0.0;
        for (int j = 0; j < t.grid.n(); ++j) s += t.grid.tau(j) * dot(t.fields[j], mass.apply(t.fields[j]));
        return std::sqrt(s);
    }
    // discrete L2(Q) pairing sum_j tau_j v_j^T M w_j
    double l2q_inner(const Trajectory& v, const Trajectory& w) const {
        double s = 0.0;
        for (int j = 0; j < v.grid.n(); ++j) s += v.grid.tau(j) * dot(v.fields[j], mass.apply(w.fields[j]));
        return s;
    }
};

struct ProblemSpec {
    std::shared_ptr<const Discretization> disc;
    TimeGrid grid;
    AnisotropySpec<2> aniso;
    double epsilon;
    double lambda;
    NodalField y0;
    NodalField y_target;

    ProblemSpec(std::shared_ptr<const Discretization> disc_, TimeGrid grid_,
                AnisotropySpec<2> aniso_, double epsilon_, double lambda_, NodalField y0_,
                NodalField y_target_)
        : disc(std::move(disc_)),
          grid(std::move(grid_)),
          aniso(std::move(aniso_)),
          epsilon(epsilon_),
          lambda(lambda_),
          y0(std::move(y0_)),
          y_target(std::move(y_target_)) {
        if (epsilon <= 0.0 || lambda <= 0.0)
            throw std::invalid_argument("epsilon and lambda must be positive");
        if (y0.size() != disc->mesh.node_count() || y_target.size() != disc->mesh.node_count())
            throw std::invalid_argument("initial/target field size does not match the mesh");
    }

    std::size_t n_nodes() const { return disc->mesh.node_count(); }
};

// Model defaults: eps = 1/(14 pi), lambda = 0.01, delta = 1e-7.
inline constexpr double default_epsilon() { return 1.0 / (14.0 * M_PI); }
inline constexpr double default_lambda() { return 0.01; }
inline constexpr double default_delta() { return 1e-7; }

}  // namespace anisoac
