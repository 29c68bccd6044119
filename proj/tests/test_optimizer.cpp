#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>

#include "anisoac/optimizer.hpp"
#include "oracles.hpp"

using namespace anisoac;
using Catch::Approx;

namespace {

double euclid(const DVec& a, const DVec& b) { return dot(a, b); }

NodalField tanh_circle(const StructuredTriMesh& mesh, double radius, double eps) {
    NodalField y(mesh.node_count());
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const Vec<2>& p = mesh.coord(i);
        y[i] = std::tanh((radius - std::hypot(p[0], p[1])) / (std::sqrt(2.0) * eps));
    }
    return y;
}

}  // namespace

TEST_CASE("steihaug_solve") {
    SECTION("identity Hessian and a huge radius is one exact CG step") {
        DVec g = {1.0, -2.0, 3.0};
        auto res = steihaug_solve(
            g, [](const DVec& v) { return v; }, euclid, 1e9, 1e-8, 50);
        CHECK(res.iterations == 1);
        CHECK(res.kind == SteihaugTermination::interior);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(res.step[i] == Approx(-g[i]));
        CHECK(res.model_decrease == Approx(0.5 * dot(g, g)));
    }

    SECTION("negative curvature exits on the boundary") {
        DVec g = {1.0, 0.0};
        auto apply = [](const DVec& v) {
            DVec r = v;
            r[0] = -v[0];  // eigenvalues {-1, 1}
            return r;
        };
        auto res = steihaug_solve(g, apply, euclid, 1.0, 1e-8, 50);
        CHECK(res.kind == SteihaugTermination::neg_curvature);
        CHECK(res.step_norm == Approx(1.0).epsilon(1e-12));
    }

    SECTION("random SPD surrogate matches a dense factorization oracle") {
        auto rng = oracle::rng(3);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(10, 10);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) a(i, j) = oracle::uniform(rng, -1.0, 1.0);
        Eigen::MatrixXd h = a.transpose() * a + 0.5 * Eigen::MatrixXd::Identity(10, 10);
        DVec g(10);
        for (int i = 0; i < 10; ++i) g[i] = oracle::uniform(rng, -1.0, 1.0);
        auto apply = [&](const DVec& v) {
            Eigen::VectorXd x(10);
            for (int i = 0; i < 10; ++i) x(i) = v[i];
            const Eigen::VectorXd y = h * x;
            DVec r(10);
            for (int i = 0; i < 10; ++i) r[i] = y(i);
            return r;
        };
        auto res = steihaug_solve(g, apply, euclid, 1e9, 1e-10, 200);
        CHECK(res.kind == SteihaugTermination::interior);
        Eigen::VectorXd rhs(10);
        for (int i = 0; i < 10; ++i) rhs(i) = -g[i];
        const Eigen::VectorXd exact = h.ldlt().solve(rhs);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 10; ++i) {
            num += (res.step[i] - exact(i)) * (res.step[i] - exact(i));
            den += exact(i) * exact(i);
        }
        CHECK(std::sqrt(num / den) <= 1e-8);
    }

    SECTION("model decrease is at least the Cauchy-point decrease") {
        auto rng = oracle::rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) a(i, j) = oracle::uniform(rng, -1.0, 1.0);
            // symmetric, possibly indefinite
            Eigen::MatrixXd h = 0.5 * (a + a.transpose());
            DVec g(8);
            for (int i = 0; i < 8; ++i) g[i] = oracle::uniform(rng, -1.0, 1.0);
            auto apply = [&](const DVec& v) {
                Eigen::VectorXd x(8);
                for (int i = 0; i < 8; ++i) x(i) = v[i];
                const Eigen::VectorXd y = h * x;
                DVec r(8);
                for (int i = 0; i < 8; ++i) r[i] = y(i);
                return r;
            };
            const double radius = oracle::uniform(rng, 0.1, 2.0);
            auto res = steihaug_solve(g, apply, euclid, radius, 1e-10, 100);

            // Cauchy point: minimizer of the model along -g within the radius
            Eigen::VectorXd ge(8);
            for (int i = 0; i < 8; ++i) ge(i) = g[i];
            const double ghg = ge.dot(h * ge);
            const double gg = ge.dot(ge);
            double t = radius / std::sqrt(gg);
            if (ghg > 0.0) t = std::min(t, gg / ghg);
            const double cauchy_decrease = t * gg - 0.5 * t * t * ghg;
            REQUIRE(res.model_decrease >= cauchy_decrease * (1.0 - 1e-10));
        }
    }

    SECTION("boundary exit never exceeds the radius") {
        auto rng = oracle::rng(5);
        DVec g(6);
        for (double& v : g) v = oracle::uniform(rng, -1.0, 1.0);
        auto apply = [](const DVec& v) {
            DVec r = v;
            scale(r, 1e-3);  // tiny curvature forces a long Newton step
            return r;
        };
        auto res = steihaug_solve(g, apply, euclid, 0.5, 1e-10, 100);
        CHECK(res.kind == SteihaugTermination::boundary);
        CHECK(res.step_norm <= 0.5 * (1.0 + 1e-12));
        CHECK(res.step_norm == Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("trust region configuration validation") {
    TrustRegionConfig c;
    CHECK_NOTHROW(c.validate());
    TrustRegionConfig bad = c;
    bad.eta_accept = 0.9;
    bad.eta_expand = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.shrink = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("minimize") {
    auto disc = std::make_shared<Discretization>(16);
    const std::size_t n = disc->mesh.node_count();
    const double eps = default_epsilon();

    SECTION("already stationary: zero trust region steps") {
        ProblemSpec spec(disc, TimeGrid::uniform(5e-4, 5, eps * eps), l1_anisotropy(0.01, 1e-7),
                         eps, default_lambda(), NodalField(n, 1.0), NodalField(n, 1.0));
        TrustRegionConfig config;
        config.gtol_abs = 1e-8;
        const MinimizeResult res = minimize(spec, Trajectory::zeros(spec.grid, n), config);
        CHECK_FALSE(res.failed);
        CHECK(res.report.tr_steps == 0);
        CHECK(res.report.termination == "gtol");
    }

    SECTION("drives a circle toward a smaller target circle") {
        ProblemSpec spec(disc, TimeGrid::uniform(5e-4, 5, eps * eps), l1_anisotropy(0.01, 1e-7),
                         eps, default_lambda(), tanh_circle(disc->mesh, 0.5, eps),
                         tanh_circle(disc->mesh, 0.42, eps));
        TrustRegionConfig config;
        config.gtol_rel = 1e-6;
        config.max_outer = 40;
        const MinimizeResult res = minimize(spec, Trajectory::zeros(spec.grid, n), config);
        CHECK_FALSE(res.failed);
        REQUIRE(!res.report.iterations.empty());

        // uncontrolled cost as the baseline the optimizer must beat
        const Trajectory u0 = Trajectory::zeros(spec.grid, n);
        const CostBreakdown base = cost(spec, forward_solve(spec, u0), u0);
        CHECK(res.report.final_j < 0.5 * base.j);

        double last_accepted_j = base.j;
        for (const auto& row : res.report.iterations) {
            CHECK(row.step_norm <= row.radius * (1.0 + 1e-12));
            if (row.accepted) {
                CHECK(row.j <= last_accepted_j + 1e-12);
                last_accepted_j = row.j;
            }
        }
        CHECK(res.report.accepted_steps > 0);
        CHECK(res.report.max_cg > 0);
    }
}
