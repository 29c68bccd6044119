#pragma once
// Small fixed-size vectors/matrices for per-element work plus helpers for
// dynamic nodal vectors. Everything is plain double; no external deps.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace anisoac {

template <std::size_t D>
using Vec = std::array<double, D>;

// Row-major square matrix.
template <std::size_t D>
using Mat = std::array<Vec<D>, D>;

template <std::size_t D>
inline double dot(const Vec<D>& a, const Vec<D>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < D; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t D>
inline double norm(const Vec<D>& a) {
    return std::sqrt(dot(a, a));
}

template <std::size_t D>
inline Vec<D> matvec(const Mat<D>& m, const Vec<D>& v) {
    Vec<D> r{};
    for (std::size_t i = 0; i < D; ++i) r[i] = dot(m[i], v);
    return r;
}

template <std::size_t D>
inline Mat<D> outer(const Vec<D>& a, const Vec<D>& b) {
    Mat<D> m{};
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) m[i][j] = a[i] * b[j];
    return m;
}

template <std::size_t D>
inline void add_scaled(Mat<D>& m, double a, const Mat<D>& x) {
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) m[i][j] += a * x[i][j];
}

template <std::size_t D>
inline void add_scaled(Vec<D>& v, double a, const Vec<D>& x) {
    for (std::size_t i = 0; i < D; ++i) v[i] += a * x[i];
}

template <std::size_t D>
inline double max_abs(const Mat<D>& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) r = std::max(r, std::abs(m[i][j]));
    return r;
}

// ---- dynamic vectors (nodal coefficient arrays) ----

using DVec = std::vector<double>;

inline double dot(const DVec& a, const DVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const DVec& a) { return std::sqrt(dot(a, a)); }

// y += alpha * x
inline void axpy(DVec& y, double alpha, const DVec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(DVec& y, double alpha) {
    for (double& v : y) v *= alpha;
}

inline void set_zero(DVec& y) {
    for (double& v : y) v = 0.0;
}

inline DVec zero_like(const DVec& v) { return DVec(v.size(), 0.0); }

}  // namespace anisoac
