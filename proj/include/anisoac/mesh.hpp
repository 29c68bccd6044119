#pragma once
// Uniform P1 triangulation of Omega = (-1,1)^2. Every cell is split along the
// same (lower-left to upper-right) diagonal, so each triangle has area h^2/2
// and element-wise constant shape-function gradients.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "anisoac/linalg.hpp"

namespace anisoac {

using NodalField = std::vector<double>;

struct Triangle {
    std::array<int, 3> nodes;      // CCW
    std::array<Vec<2>, 3> grad;    // constant P1 shape gradients
    double area;
};

class StructuredTriMesh {
public:
    explicit StructuredTriMesh(int n_div) : n_div_(n_div) {
        if (n_div < 2) throw std::invalid_argument("mesh needs n_div >= 2");
        const int n = n_div;
        const double h = 2.0 / n;
        coords_.resize(static_cast<std::size_t>(n + 1) * (n + 1));
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
                coords_[node_index(i, j)] = {-1.0 + h * i, -1.0 + h * j};

        elements_.reserve(static_cast<std::size_t>(2) * n * n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int v00 = node_index(i, j);
                const int v10 = node_index(i + 1, j);
                const int v01 = node_index(i, j + 1);
                const int v11 = node_index(i + 1, j + 1);
                push_triangle(v00, v10, v11);
                push_triangle(v00, v11, v01);
            }
        }
    }

    int n_div() const { return n_div_; }
    double h() const { return 2.0 / n_div_; }
    std::size_t node_count() const { return coords_.size(); }
    std::size_t element_count() const { return elements_.size(); }
    const std::vector<Triangle>& elements() const { return elements_; }
    const Vec<2>& coord(int node) const { return coords_[node]; }
    int node_index(int i, int j) const { return j * (n_div_ + 1) + i; }

    // gradient of a P1 field on one element (exact, element-wise constant)
    Vec<2> element_gradient(const Triangle& t, const NodalField& y) const {
        Vec<2> g{};
        for (int a = 0; a < 3; ++a) add_scaled(g, y[t.nodes[a]], t.grad[a]);
        return g;
    }

private:
    void push_triangle(int a, int b, int c) {
        const Vec<2>& pa = coords_[a];
        const Vec<2>& pb = coords_[b];
        const Vec<2>& pc = coords_[c];
        const double det =
            (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0]);
        Triangle t;
        t.nodes = {a, b, c};
        t.area = 0.5 * det;
        t.grad[0] = {(pb[1] - pc[1]) / det, (pc[0] - pb[0]) / det};
        t.grad[1] = {(pc[1] - pa[1]) / det, (pa[0] - pc[0]) / det};
        t.grad[2] = {(pa[1] - pb[1]) / det, (pb[0] - pa[0]) / det};
        elements_.push_back(t);
    }

    int n_div_;
    std::vector<Vec<2>> coords_;
    std::vector<Triangle> elements_;
};

inline StructuredTriMesh build_mesh(int n_div) { return StructuredTriMesh(n_div); }

}  // namespace anisoac
