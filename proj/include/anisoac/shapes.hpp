#pragma once
// Shape generators for initial and target states. Fields are the equilibrium
// profile y(x) = tanh(sd(x)/(sqrt(2) eps)) of a signed distance (positive
// inside); unions take the pointwise max of signed distances. Circles and
// squares use exact distances, polygon-like shapes (hexagon, star) use a
// densely sampled boundary polyline with a radial inside test.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisoac/mesh.hpp"

namespace anisoac {

struct ShapeSpec {
    enum class Kind { circle, square, hexagon, star, full_domain };
    Kind kind = Kind::circle;
    Vec<2> center{0.0, 0.0};
    double radius = 0.5;   // circle radius, hexagon circumradius, square half-width
    int petals = 4;        // star only
    double r_inner = 0.25; // star only
    double r_outer = 0.6;  // star only
    std::vector<ShapeSpec> union_parts;  // additional shapes joined to this one

    static ShapeSpec make(Kind kind, Vec<2> c, double r) {
        ShapeSpec s;
        s.kind = kind;
        s.center = c;
        s.radius = r;
        return s;
    }
    static ShapeSpec circle(Vec<2> c, double r) { return make(Kind::circle, c, r); }
    static ShapeSpec square(Vec<2> c, double half_width) {
        return make(Kind::square, c, half_width);
    }
    static ShapeSpec hexagon(Vec<2> c, double r) { return make(Kind::hexagon, c, r); }
    static ShapeSpec star(Vec<2> c, int k, double r_inner, double r_outer) {
        ShapeSpec s = make(Kind::star, c, r_outer);
        s.petals = k;
        s.r_inner = r_inner;
        s.r_outer = r_outer;
        return s;
    }
    static ShapeSpec full_domain() { return make(Kind::full_domain, {0.0, 0.0}, 0.0); }
};

namespace detail {

// star boundary radius at polar angle theta
inline double star_radius(const ShapeSpec& s, double theta) {
    return s.r_inner + (s.r_outer - s.r_inner) * (0.5 + 0.5 * std::cos(s.petals * theta));
}

inline std::vector<Vec<2>> boundary_polyline(const ShapeSpec& s, int n_samples) {
    std::vector<Vec<2>> pts;
    pts.reserve(n_samples);
    if (s.kind == ShapeSpec::Kind::hexagon) {
        for (int k = 0; k < 6; ++k) {
            const double a = M_PI / 3.0 * k;
            pts.push_back({s.center[0] + s.radius * std::cos(a),
                           s.center[1] + s.radius * std::sin(a)});
        }
        return pts;
    }
    for (int k = 0; k < n_samples; ++k) {
        const double a = 2.0 * M_PI * k / n_samples;
        const double r = s.kind == ShapeSpec::Kind::star ? star_radius(s, a) : s.radius;
        pts.push_back({s.center[0] + r * std::cos(a), s.center[1] + r * std::sin(a)});
    }
    return pts;
}

inline double distance_to_polyline(const std::vector<Vec<2>>& poly, const Vec<2>& x) {
    double best = 1e300;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec<2>& a = poly[i];
        const Vec<2>& b = poly[(i + 1) % poly.size()];
        const double ex = b[0] - a[0], ey = b[1] - a[1];
        const double px = x[0] - a[0], py = x[1] - a[1];
        const double t = std::clamp((px * ex + py * ey) / (ex * ex + ey * ey), 0.0, 1.0);
        const double dx = px - t * ex, dy = py - t * ey;
        best = std::min(best, dx * dx + dy * dy);
    }
    return std::sqrt(best);
}

inline double single_signed_distance(const ShapeSpec& s, const Vec<2>& x) {
    const double dx = x[0] - s.center[0];
    const double dy = x[1] - s.center[1];
    switch (s.kind) {
        case ShapeSpec::Kind::circle:
            return s.radius - std::hypot(dx, dy);
        case ShapeSpec::Kind::square: {
            const double qx = std::abs(dx) - s.radius;
            const double qy = std::abs(dy) - s.radius;
            const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
            const double inside = std::min(std::max(qx, qy), 0.0);
            return -(outside + inside);
        }
        case ShapeSpec::Kind::full_domain:
            // saturates tanh to exactly 1, so "fill everything" targets are the
            // exact stationary pure phase rather than a boundary-layer profile
            return 10.0;
        case ShapeSpec::Kind::hexagon:
        case ShapeSpec::Kind::star: {
            // polyline cache keyed on the shape parameters
            static thread_local std::array<double, 7> cached_key{};
            static thread_local std::vector<Vec<2>> cached_poly;
            const std::array<double, 7> key{static_cast<double>(s.kind), s.center[0], s.center[1],
                                            s.radius, static_cast<double>(s.petals), s.r_inner,
                                            s.r_outer};
            if (key != cached_key || cached_poly.empty()) {
                cached_poly = boundary_polyline(s, 2048);
                cached_key = key;
            }
            const double d = distance_to_polyline(cached_poly, x);
            const double theta = std::atan2(dy, dx);
            const double rb = s.kind == ShapeSpec::Kind::star ? star_radius(s, theta) : 0.0;
            bool inside;
            if (s.kind == ShapeSpec::Kind::star) {
                inside = std::hypot(dx, dy) <= rb;
            } else {
                inside = true;  // convex: inside iff left of every edge
                for (std::size_t i = 0; i < cached_poly.size() && inside; ++i) {
                    const Vec<2>& a = cached_poly[i];
                    const Vec<2>& b = cached_poly[(i + 1) % cached_poly.size()];
                    inside = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]) >= 0.0;
                }
            }
            return inside ? d : -d;
        }
    }
    return 0.0;
}

// largest |coordinate| reached by the shape boundary; the full-domain shape
// has no interface inside the domain, so no margin constraint applies
inline double max_extent(const ShapeSpec& s) {
    if (s.kind == ShapeSpec::Kind::full_domain) return 0.0;
    double m = 0.0;
    for (const Vec<2>& p : boundary_polyline(s, 512))
        m = std::max(m, std::max(std::abs(p[0]), std::abs(p[1])));
    for (const ShapeSpec& part : s.union_parts) m = std::max(m, max_extent(part));
    return m;
}

}  // namespace detail

inline double signed_distance(const ShapeSpec& s, const Vec<2>& x) {
    double d = detail::single_signed_distance(s, x);
    for (const ShapeSpec& part : s.union_parts)
        d = std::max(d, detail::single_signed_distance(part, x));
    return d;
}

inline NodalField make_field(const ShapeSpec& shape, const StructuredTriMesh& mesh, double eps) {
    if (detail::max_extent(shape) > 1.0)
        throw std::invalid_argument("shape extends outside the domain (-1,1)^2");
    NodalField y(mesh.node_count());
    const double w = std::sqrt(2.0) * eps;
    for (std::size_t i = 0; i < mesh.node_count(); ++i)
        y[i] = std::tanh(signed_distance(shape, mesh.coord(i)) / w);
    return y;
}

}  // namespace anisoac
