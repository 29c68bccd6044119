#include <catch2/catch_amalgamated.hpp>

#include "anisoac/problem.hpp"
#include "anisoac/shapes.hpp"
#include "oracles.hpp"

using namespace anisoac;
using Catch::Approx;

TEST_CASE("signed distances") {
    SECTION("circle is exact") {
        const ShapeSpec c = ShapeSpec::circle({0.1, -0.2}, 0.4);
        CHECK(signed_distance(c, {0.1, -0.2}) == Approx(0.4));
        CHECK(signed_distance(c, {0.5, -0.2}) == Approx(0.0).margin(1e-15));
        CHECK(signed_distance(c, {0.9, -0.2}) == Approx(-0.4));
    }
    SECTION("square is the exact box distance") {
        const ShapeSpec s = ShapeSpec::square({0.0, 0.0}, 0.3);
        CHECK(signed_distance(s, {0.0, 0.0}) == Approx(0.3));
        CHECK(signed_distance(s, {0.3, 0.0}) == Approx(0.0).margin(1e-15));
        CHECK(signed_distance(s, {0.5, 0.0}) == Approx(-0.2));
        // outside a corner: Euclidean distance to the corner point
        CHECK(signed_distance(s, {0.4, 0.4}) == Approx(-std::sqrt(2.0) * 0.1).epsilon(1e-12));
    }
    SECTION("hexagon has six-fold symmetry") {
        const ShapeSpec h = ShapeSpec::hexagon({0.0, 0.0}, 0.45);
        auto g = oracle::rng(3);
        for (int i = 0; i < 30; ++i) {
            const double r = oracle::uniform(g, 0.0, 0.8);
            const double a = oracle::uniform(g, 0.0, 2.0 * M_PI);
            const Vec<2> x{r * std::cos(a), r * std::sin(a)};
            const Vec<2> xr{r * std::cos(a + M_PI / 3.0), r * std::sin(a + M_PI / 3.0)};
            CHECK(signed_distance(h, x) == Approx(signed_distance(h, xr)).margin(5e-3));
        }
        CHECK(signed_distance(h, {0.45, 0.0}) == Approx(0.0).margin(1e-3));
    }
    SECTION("star boundary points sit on the zero level") {
        const ShapeSpec s = ShapeSpec::star({0.0, 0.0}, 4, 0.25, 0.6);
        for (double theta : {0.0, 0.3, 1.1, 2.9}) {
            const double r = 0.25 + 0.35 * (0.5 + 0.5 * std::cos(4.0 * theta));
            const Vec<2> x{r * std::cos(theta), r * std::sin(theta)};
            CHECK(std::abs(signed_distance(s, x)) <= 2e-3);
        }
    }
    SECTION("union takes the pointwise max") {
        ShapeSpec u = ShapeSpec::circle({0.0, 0.4}, 0.3);
        u.union_parts.push_back(ShapeSpec::circle({0.0, -0.4}, 0.3));
        CHECK(signed_distance(u, {0.0, 0.4}) == Approx(0.3));
        CHECK(signed_distance(u, {0.0, -0.4}) == Approx(0.3));
        CHECK(signed_distance(u, {0.0, 0.0}) == Approx(-0.1));
    }
}

TEST_CASE("make_field") {
    const StructuredTriMesh mesh(128);
    const double eps = default_epsilon();

    SECTION("full-domain shape saturates to the pure phase") {
        const NodalField f = make_field(ShapeSpec::full_domain(), mesh, eps);
        for (double v : f) CHECK(v == 1.0);
    }

    SECTION("circle value at the center") {
        const NodalField f = make_field(ShapeSpec::circle({0.0, 0.0}, 0.5), mesh, eps);
        const int center = mesh.node_index(64, 64);
        CHECK(f[center] == Approx(std::tanh(0.5 / (std::sqrt(2.0) * eps))).margin(1e-9));
        CHECK(f[center] == Approx(1.0).margin(1e-9));
    }

    SECTION("zero level set within one mesh cell of the circle radius") {
        const NodalField f = make_field(ShapeSpec::circle({0.0, 0.0}, 0.5), mesh, eps);
        // walk the +x axis from the center and find the sign change
        const int row = 64;
        double crossing = -1.0;
        for (int i = 64; i < 128; ++i) {
            const double a = f[mesh.node_index(i, row)];
            const double b = f[mesh.node_index(i + 1, row)];
            if (a > 0.0 && b <= 0.0) {
                const double xa = mesh.coord(mesh.node_index(i, row))[0];
                crossing = xa + mesh.h() * a / (a - b);
                break;
            }
        }
        REQUIRE(crossing > 0.0);
        CHECK(std::abs(crossing - 0.5) <= mesh.h());
    }

    SECTION("shapes outside the domain are rejected") {
        CHECK_THROWS_AS(make_field(ShapeSpec::circle({0.8, 0.0}, 0.5), mesh, eps),
                        std::invalid_argument);
    }
}
