#pragma once
// Sparse assembly of the operators appearing in the scheme: P1 mass,
// coefficient-weighted stiffness, the quasilinear A'(grad y) term and the
// double-well terms. Gradients of P1 fields are element-wise constant, so the
// anisotropy terms are integrated exactly with one evaluation per element.
// Potential terms use a fixed 6-point degree-4 triangle rule, which is exact
// for every integrand assembled here (all are polynomials of degree <= 4).

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "anisoac/anisotropy.hpp"
#include "anisoac/mesh.hpp"
#include "anisoac/potential.hpp"
#include "anisoac/sparse.hpp"

namespace anisoac {

struct TriQuadPoint {
    std::array<double, 3> bary;
    double weight;  // relative to element area, weights sum to 1
};

// Dunavant degree-4 rule.
inline const std::array<TriQuadPoint, 6>& triangle_quadrature() {
    static const std::array<TriQuadPoint, 6> rule = {{
        {{0.108103018168070, 0.445948490915965, 0.445948490915965}, 0.223381589678011},
        {{0.445948490915965, 0.108103018168070, 0.445948490915965}, 0.223381589678011},
        {{0.445948490915965, 0.445948490915965, 0.108103018168070}, 0.223381589678011},
        {{0.816847572980459, 0.091576213509771, 0.091576213509771}, 0.109951743655322},
        {{0.091576213509771, 0.816847572980459, 0.091576213509771}, 0.109951743655322},
        {{0.091576213509771, 0.091576213509771, 0.816847572980459}, 0.109951743655322},
    }};
    return rule;
}

inline SparseOperator assemble_mass(const StructuredTriMesh& mesh,
                                    std::shared_ptr<const SparsityPattern> pattern = nullptr) {
    if (!pattern) pattern = SparsityPattern::build(mesh);
    SparseOperator m(pattern);
    for (const Triangle& t : mesh.elements()) {
        const double w = t.area / 12.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) m.add(t.nodes[a], t.nodes[b], (a == b ? 2.0 : 1.0) * w);
    }
    return m;
}

// K[i][j] = sum_e area (grad phi_i)^T C_e (grad phi_j), one matrix per element.
inline SparseOperator assemble_weighted_stiffness(
    const StructuredTriMesh& mesh, const std::vector<Mat<2>>& coeff_per_element,
    std::shared_ptr<const SparsityPattern> pattern = nullptr) {
    if (coeff_per_element.size() != mesh.element_count())
        throw std::invalid_argument("one coefficient matrix per element required");
    if (!pattern) pattern = SparsityPattern::build(mesh);
    SparseOperator k(pattern);
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const Triangle& t = mesh.elements()[e];
        const Mat<2>& c = coeff_per_element[e];
        std::array<Vec<2>, 3> cg;
        for (int b = 0; b < 3; ++b) cg[b] = matvec(c, t.grad[b]);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                k.add(t.nodes[a], t.nodes[b], t.area * dot(t.grad[a], cg[b]));
    }
    return k;
}

inline SparseOperator assemble_laplace(const StructuredTriMesh& mesh,
                                       std::shared_ptr<const SparsityPattern> pattern = nullptr) {
    const Mat<2> eye{{{1.0, 0.0}, {0.0, 1.0}}};
    return assemble_weighted_stiffness(mesh, std::vector<Mat<2>>(mesh.element_count(), eye),
                                       std::move(pattern));
}

// F[i] = sum_e area A'(grad y|_e) . grad phi_i  -- exact, and simultaneously
// the exact gradient of sum_e area A(grad y|_e) with respect to nodal values.
inline void apply_quasilinear_term(const StructuredTriMesh& mesh, const AnisotropySpec<2>& aniso,
                                   const NodalField& y, NodalField& out) {
    set_zero(out);
    for (const Triangle& t : mesh.elements()) {
        const Vec<2> g = mesh.element_gradient(t, y);
        const Vec<2> a = aniso.grad(g);
        for (int b = 0; b < 3; ++b) out[t.nodes[b]] += t.area * dot(a, t.grad[b]);
    }
}

inline NodalField apply_quasilinear_term(const StructuredTriMesh& mesh,
                                         const AnisotropySpec<2>& aniso, const NodalField& y) {
    NodalField out(mesh.node_count());
    apply_quasilinear_term(mesh, aniso, y, out);
    return out;
}

// Load vector int psi'(y_h) phi_i.
inline void assemble_potential_gradient(const StructuredTriMesh& mesh, const NodalField& y,
                                        NodalField& out) {
    set_zero(out);
    for (const Triangle& t : mesh.elements()) {
        for (const TriQuadPoint& q : triangle_quadrature()) {
            double yq = 0.0;
            for (int a = 0; a < 3; ++a) yq += q.bary[a] * y[t.nodes[a]];
            const double w = t.area * q.weight * DoubleWell::d1(yq);
            for (int a = 0; a < 3; ++a) out[t.nodes[a]] += w * q.bary[a];
        }
    }
}

inline NodalField assemble_potential_gradient(const StructuredTriMesh& mesh, const NodalField& y) {
    NodalField out(mesh.node_count());
    assemble_potential_gradient(mesh, y, out);
    return out;
}

// Weighted mass matrix int psi''(y_h) phi_i phi_j.
inline SparseOperator assemble_potential_hessian(
    const StructuredTriMesh& mesh, const NodalField& y,
    std::shared_ptr<const SparsityPattern> pattern = nullptr) {
    if (!pattern) pattern = SparsityPattern::build(mesh);
    SparseOperator m(pattern);
    for (const Triangle& t : mesh.elements()) {
        for (const TriQuadPoint& q : triangle_quadrature()) {
            double yq = 0.0;
            for (int a = 0; a < 3; ++a) yq += q.bary[a] * y[t.nodes[a]];
            const double w = t.area * q.weight * DoubleWell::d2(yq);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) m.add(t.nodes[a], t.nodes[b], w * q.bary[a] * q.bary[b]);
        }
    }
    return m;
}

// Vector int psi'''(y_h) w_h r_h phi_i (r defaults to 1 for the single-weight
// form). Degree 4 at most, so still exact under the fixed rule.
inline void assemble_potential_third(const StructuredTriMesh& mesh, const NodalField& y,
                                     const NodalField& w, const NodalField* r, NodalField& out) {
    set_zero(out);
    for (const Triangle& t : mesh.elements()) {
        for (const TriQuadPoint& q : triangle_quadrature()) {
            double yq = 0.0, wq = 0.0, rq = 0.0;
            for (int a = 0; a < 3; ++a) {
                yq += q.bary[a] * y[t.nodes[a]];
                wq += q.bary[a] * w[t.nodes[a]];
                if (r) rq += q.bary[a] * (*r)[t.nodes[a]];
            }
            if (!r) rq = 1.0;
            const double f = t.area * q.weight * DoubleWell::d3(yq) * wq * rq;
            for (int a = 0; a < 3; ++a) out[t.nodes[a]] += f * q.bary[a];
        }
    }
}

inline NodalField assemble_potential_third(const StructuredTriMesh& mesh, const NodalField& y,
                                           const NodalField& w, const NodalField* r = nullptr) {
    NodalField out(mesh.node_count());
    assemble_potential_third(mesh, y, w, r, out);
    return out;
}

// Kahan-compensated accumulator; energy comparisons between consecutive
// steps need better than naive summation on fine meshes.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double t = v - carry;
        const double s = sum + t;
        carry = (s - sum) - t;
        sum = s;
    }
};

// int psi(y_h) dx
inline double integrate_potential(const StructuredTriMesh& mesh, const NodalField& y) {
    CompensatedSum s;
    for (const Triangle& t : mesh.elements()) {
        for (const TriQuadPoint& q : triangle_quadrature()) {
            double yq = 0.0;
            for (int a = 0; a < 3; ++a) yq += q.bary[a] * y[t.nodes[a]];
            s.add(t.area * q.weight * DoubleWell::value(yq));
        }
    }
    return s.sum;
}

}  // namespace anisoac
