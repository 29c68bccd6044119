#pragma once
// BGN anisotropy densities gamma(p) = sum_l sqrt(p^T G_l p) with the shift
// regularization gamma_l -> sqrt(gamma_l^2 + delta), and the derivatives of
// A_delta(p) = 1/2 gamma_delta(p)^2 up to third order. The third derivative
// is a hand-derived closed form (directional derivative of the Hessian), so
// the module stays dependency-free and evaluations are allocation-free.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisoac/linalg.hpp"

namespace anisoac {

template <std::size_t D>
struct DerivativeBundle {
    double value = 0.0;  // A_delta(p)
    Vec<D> grad{};       // A_delta'(p)
    Mat<D> hess{};       // A_delta''(p)
};

namespace detail {

// Cholesky-based SPD test; also rejects asymmetry beyond tol.
template <std::size_t D>
inline void require_spd(const Mat<D>& g, std::size_t index) {
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = i + 1; j < D; ++j)
            if (std::abs(g[i][j] - g[j][i]) > 1e-12)
                throw std::invalid_argument("anisotropy matrix " + std::to_string(index) +
                                            " is not symmetric");
    Mat<D> l{};
    for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = g[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s <= 0.0)
                    throw std::invalid_argument("anisotropy matrix " + std::to_string(index) +
                                                " is not positive definite");
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
}

}  // namespace detail

template <std::size_t D>
class AnisotropySpec {
public:
    AnisotropySpec(std::vector<Mat<D>> matrices, double delta)
        : matrices_(std::move(matrices)), delta_(delta) {
        if (matrices_.empty()) throw std::invalid_argument("anisotropy needs at least one matrix");
        if (delta_ < 0.0) throw std::invalid_argument("regularization shift must be >= 0");
        for (std::size_t l = 0; l < matrices_.size(); ++l) detail::require_spd(matrices_[l], l);
    }

    std::size_t count() const { return matrices_.size(); }
    double delta() const { return delta_; }
    const Mat<D>& matrix(std::size_t l) const { return matrices_[l]; }

    AnisotropySpec with_delta(double delta) const { return AnisotropySpec(matrices_, delta); }

    // gamma_l^delta(p) = sqrt(p^T G_l p + delta)
    double gamma_l(const Vec<D>& p, std::size_t l) const {
        return std::sqrt(dot(matvec(matrices_[l], p), p) + delta_);
    }

    // A_delta(p) = 1/2 (sum_l gamma_l^delta(p))^2
    double value(const Vec<D>& p) const {
        double g = 0.0;
        for (std::size_t l = 0; l < count(); ++l) g += gamma_l(p, l);
        return 0.5 * g * g;
    }

    // A_delta'(p) = sum_{l,m} gamma_m/gamma_l G_l p; continuous extension
    // A'(0) = 0 in the unregularized case.
    Vec<D> grad(const Vec<D>& p) const {
        const std::size_t L = count();
        double gamma = 0.0;
        for (std::size_t l = 0; l < L; ++l) gamma += gamma_l(p, l);
        Vec<D> r{};
        for (std::size_t l = 0; l < L; ++l) {
            const Vec<D> gl = matvec(matrices_[l], p);
            const double sl = std::sqrt(dot(gl, p) + delta_);
            if (sl == 0.0) return Vec<D>{};  // only at p = 0 with delta = 0
            add_scaled(r, gamma / sl, gl);
        }
        return r;
    }

    // A_delta''(p) = gamma gamma'' + gamma' gamma'^T. Undefined at the origin
    // when delta = 0 (0-homogeneous with no limit).
    Mat<D> hess(const Vec<D>& p) const {
        Mat<D> h{};
        Vec<D> dgamma{};
        double gamma = 0.0;
        const std::size_t L = count();
        for (std::size_t l = 0; l < L; ++l) {
            const Vec<D> gl = matvec(matrices_[l], p);
            const double sl = std::sqrt(dot(gl, p) + delta_);
            if (sl == 0.0) throw std::domain_error("A'' is undefined at p = 0 for delta = 0");
            gamma += sl;
            add_scaled(dgamma, 1.0 / sl, gl);
            // gamma'' contribution: G_l/s_l - g_l g_l^T / s_l^3
            add_scaled(h, 1.0 / sl, matrices_[l]);
            add_scaled(h, -1.0 / (sl * sl * sl), outer(gl, gl));
        }
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j) h[i][j] = gamma * h[i][j] + dgamma[i] * dgamma[j];
        return h;
    }

    // Value, gradient and Hessian in one pass (per-element hot loop).
    DerivativeBundle<D> bundle(const Vec<D>& p) const {
        DerivativeBundle<D> b;
        Vec<D> dgamma{};
        Mat<D> ddgamma{};
        double gamma = 0.0;
        const std::size_t L = count();
        for (std::size_t l = 0; l < L; ++l) {
            const Vec<D> gl = matvec(matrices_[l], p);
            const double sl = std::sqrt(dot(gl, p) + delta_);
            if (sl == 0.0) throw std::domain_error("A'' is undefined at p = 0 for delta = 0");
            gamma += sl;
            add_scaled(dgamma, 1.0 / sl, gl);
            add_scaled(ddgamma, 1.0 / sl, matrices_[l]);
            add_scaled(ddgamma, -1.0 / (sl * sl * sl), outer(gl, gl));
        }
        b.value = 0.5 * gamma * gamma;
        for (std::size_t i = 0; i < D; ++i) b.grad[i] = gamma * dgamma[i];
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j)
                b.hess[i][j] = gamma * ddgamma[i][j] + dgamma[i] * dgamma[j];
        return b;
    }

    // Directional derivative of the Hessian, M[i][j] = sum_k A'''[i][j][k] q_k.
    // A''' is fully symmetric for delta > 0, so this contraction matches the
    // bracket ordering of the additional adjoint source term; the convention
    // is pinned by the identity M ~ (A''(p+hq) - A''(p-hq)) / (2h).
    Mat<D> third_apply(const Vec<D>& p, const Vec<D>& q) const {
        double gamma = 0.0, dot_gamma = 0.0;
        Vec<D> dgamma{}, dot_dgamma{};
        Mat<D> ddgamma{}, dot_ddgamma{};
        const std::size_t L = count();
        for (std::size_t l = 0; l < L; ++l) {
            const Vec<D> gl = matvec(matrices_[l], p);
            const Vec<D> glq = matvec(matrices_[l], q);
            const double sl = std::sqrt(dot(gl, p) + delta_);
            if (sl == 0.0) throw std::domain_error("A''' is undefined at p = 0 for delta = 0");
            const double sl2 = sl * sl;
            const double sl3 = sl2 * sl;
            const double sdot = dot(gl, q) / sl;  // d/dh sqrt(...) along q

            gamma += sl;
            dot_gamma += sdot;
            add_scaled(dgamma, 1.0 / sl, gl);
            add_scaled(dot_dgamma, 1.0 / sl, glq);
            add_scaled(dot_dgamma, -sdot / sl2, gl);
            add_scaled(ddgamma, 1.0 / sl, matrices_[l]);
            add_scaled(ddgamma, -1.0 / sl3, outer(gl, gl));
            add_scaled(dot_ddgamma, -sdot / sl2, matrices_[l]);
            add_scaled(dot_ddgamma, -1.0 / sl3, outer(glq, gl));
            add_scaled(dot_ddgamma, -1.0 / sl3, outer(gl, glq));
            add_scaled(dot_ddgamma, 3.0 * sdot / (sl3 * sl), outer(gl, gl));
        }
        Mat<D> m{};
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j)
                m[i][j] = dot_dgamma[i] * dgamma[j] + dgamma[i] * dot_dgamma[j] +
                          dot_gamma * ddgamma[i][j] + gamma * dot_ddgamma[i][j];
        return m;
    }

    // Evaluates the unregularized lift on R^{d+1} at (p, sqrt(delta)) with
    // matrices diag(G_l, 1); equals value(p) exactly. Cross-check only.
    double lifted_value(const Vec<D>& p) const {
        double g = 0.0;
        for (std::size_t l = 0; l < count(); ++l) {
            Vec<D + 1> q{};
            for (std::size_t i = 0; i < D; ++i) q[i] = p[i];
            q[D] = std::sqrt(delta_);
            Mat<D + 1> gl{};
            for (std::size_t i = 0; i < D; ++i)
                for (std::size_t j = 0; j < D; ++j) gl[i][j] = matrices_[l][i][j];
            gl[D][D] = 1.0;
            g += std::sqrt(dot(matvec(gl, q), q));
        }
        return 0.5 * g * g;
    }

private:
    std::vector<Mat<D>> matrices_;
    double delta_;
};

// ---- the three standard 2-d choices; the 1/L rescaling is baked into G_l ----

inline AnisotropySpec<2> isotropic_anisotropy(double delta = 0.0) {
    return AnisotropySpec<2>({Mat<2>{{{1.0, 0.0}, {0.0, 1.0}}}}, delta);
}

// G_1 = diag(1, eps)/2, G_2 = diag(eps, 1)/2; eps = 0 gives the plain l1 norm.
inline AnisotropySpec<2> l1_anisotropy(double eps_aniso = 0.01, double delta = 0.0) {
    return AnisotropySpec<2>({Mat<2>{{{0.5, 0.0}, {0.0, 0.5 * eps_aniso}}},
                              Mat<2>{{{0.5 * eps_aniso, 0.0}, {0.0, 0.5}}}},
                             delta);
}

// G_l = R(pi l/3) diag(1, eps) R(pi l/3)^T / 3, l = 1,2,3.
inline AnisotropySpec<2> hexagon_anisotropy(double eps_aniso = 0.01, double delta = 0.0) {
    std::vector<Mat<2>> gs;
    for (int l = 1; l <= 3; ++l) {
        const double a = M_PI / 3.0 * l;
        const double c = std::cos(a), s = std::sin(a);
        // R diag(1,eps) R^T entries, divided by L = 3
        Mat<2> g{};
        g[0][0] = (c * c + eps_aniso * s * s) / 3.0;
        g[0][1] = (c * s - eps_aniso * s * c) / 3.0;
        g[1][0] = g[0][1];
        g[1][1] = (s * s + eps_aniso * c * c) / 3.0;
        gs.push_back(g);
    }
    return AnisotropySpec<2>(std::move(gs), delta);
}

inline AnisotropySpec<2> named_anisotropy(const std::string& name, double eps_aniso = 0.01,
                                          double delta = 0.0) {
    if (name == "isotropic") return isotropic_anisotropy(delta);
    if (name == "l1") return l1_anisotropy(eps_aniso, delta);
    if (name == "hexagon") return hexagon_anisotropy(eps_aniso, delta);
    throw std::invalid_argument("unknown anisotropy '" + name + "'");
}

}  // namespace anisoac
