// Acceptance suite: one PASS/FAIL line per criterion, exit code = number of
// failures. Criteria can be selected by number on the command line, e.g.
// `acceptance 2 8`; the default runs all of them. Desk-scale parameters keep
// the full suite in the tens of minutes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "anisoac/scenarios.hpp"
#include "lemma_suite.hpp"
#include "oracles.hpp"

using namespace anisoac;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::function<bool(std::ostream&)> run;
};

NodalField tanh_circle(const StructuredTriMesh& mesh, double radius, double eps) {
    NodalField y(mesh.node_count());
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const Vec<2>& p = mesh.coord(i);
        y[i] = std::tanh((radius - std::hypot(p[0], p[1])) / (std::sqrt(2.0) * eps));
    }
    return y;
}

Trajectory random_trajectory(const TimeGrid& grid, std::size_t n, unsigned seed, double amp) {
    auto g = oracle::rng(seed);
    Trajectory t = Trajectory::zeros(grid, n);
    for (auto& f : t.fields)
        for (double& v : f) v = oracle::uniform(g, -amp, amp);
    return t;
}

ScenarioConfig desk_config() {
    ScenarioConfig cfg;
    cfg.n_div = 64;
    cfg.horizon = 2e-3;
    cfg.tau = 1e-4;
    return cfg;
}

// ---- criterion 1: delta-convergence rate ----

bool criterion_delta_rate(std::ostream& out) {
    bool ok = true;
    for (const std::string& name : {std::string("l1"), std::string("hexagon")}) {
        ScenarioConfig cfg = desk_config();
        cfg.aniso_name = name;
        cfg.initial = ShapeSpec::circle({0.0, 0.0}, 0.5);
        const std::vector<double> deltas = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
        const DeltaStudyResult res = delta_study(cfg, deltas, 0.0);
        for (const auto& row : res.rows) ok = ok && !row.failed;
        out << name << " L2 slope " << res.slope_l2 << " ";
        ok = ok && res.slope_l2 >= 0.4 && res.slope_l2 <= 0.6;
    }
    return ok;
}

// ---- criterion 2: derivative-bound property suite ----

bool criterion_lemma_suite(std::ostream& out) {
    const std::vector<double> deltas = {0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2};
    const std::vector<double> hdeltas = {1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
    bool ok = true;
    for (const auto& base : {l1_anisotropy(0.01), hexagon_anisotropy(0.01)}) {
        const auto mono = lemma_suite::strong_monotonicity(base, deltas, 10000, 42);
        const bool mono_ok =
            mono.c0_min > 0.0 && (mono.c0_max - mono.c0_min) / mono.c0_max < 0.10;
        const double lip = lemma_suite::lipschitz_constant(base, deltas, 10000, 43);
        const auto hoelder = lemma_suite::hoelder_half(base, hdeltas, 10000, 44);
        const bool hoelder_ok = hoelder.exponent >= 0.45 && hoelder.exponent <= 0.55;
        const auto eig = lemma_suite::hessian_eigen_bounds(base, deltas, 10000, 45);
        const bool eig_ok = eig.lambda_min > 0.0 && eig.max_asymmetry <= 1e-12;

        // A''_delta(0) = L sum G_l, exactly
        const auto ad = base.with_delta(1e-7);
        Mat<2> expected{};
        for (std::size_t l = 0; l < base.count(); ++l)
            add_scaled(expected, static_cast<double>(base.count()), base.matrix(l));
        const Mat<2> h0 = ad.hess({0.0, 0.0});
        Mat<2> diff = h0;
        add_scaled(diff, -1.0, expected);
        const bool origin_ok = max_abs(diff) <= 1e-14;

        out << "[L=" << base.count() << ": c0 " << mono.c0_min << ", Lip " << lip << ", exp "
            << hoelder.exponent << ", eig " << eig.lambda_min << ".." << eig.lambda_max << "] ";
        ok = ok && mono_ok && std::isfinite(lip) && hoelder_ok && eig_ok && origin_ok;
    }
    return ok;
}

// ---- criterion 3: derivative consistency of the reduced functional ----

bool criterion_derivative_consistency(std::ostream& out) {
    auto disc = std::make_shared<Discretization>(16);
    const std::size_t n = disc->mesh.node_count();
    const double eps = default_epsilon();
    TimeGrid grid = TimeGrid::uniform(5e-4, 5, eps * eps);
    ProblemSpec spec(disc, grid, l1_anisotropy(0.01, 1e-7), eps, default_lambda(),
                     tanh_circle(disc->mesh, 0.5, eps), tanh_circle(disc->mesh, 0.45, eps));
    SolverParams tight;
    tight.newton_tol = 1e-12;
    ReducedFunctional f(spec, tight);
    Iterate it = f.evaluate(random_trajectory(grid, n, 21, 0.3));
    f.prepare_derivatives(it);

    bool ok = true;
    double worst_fd = 0.0;
    const double h = 1e-5;
    for (unsigned seed = 0; seed < 5; ++seed) {
        Trajectory v = random_trajectory(grid, n, 200 + seed, 1.0);
        scale(v, 1.0 / f.norm(v));
        Trajectory up = it.u, um = it.u;
        axpy(up, h, v);
        axpy(um, -h, v);
        const double fd = (f.evaluate(up).cost.j - f.evaluate(um).cost.j) / (2.0 * h);
        const double an = f.inner(it.gradient, v);
        worst_fd = std::max(worst_fd, std::abs(fd - an) / std::abs(an));
    }
    ok = ok && worst_fd <= 1e-5;

    const Trajectory v = random_trajectory(grid, n, 51, 1.0);
    const Trajectory w = random_trajectory(grid, n, 52, 1.0);
    const Trajectory hv = f.hessian_apply(it, v);
    const Trajectory hw = f.hessian_apply(it, w);
    const double sym =
        std::abs(f.inner(hv, w) - f.inner(v, hw)) / std::max(1e-300, std::abs(f.inner(hv, w)));
    ok = ok && sym <= 1e-8;

    const Trajectory du = random_trajectory(grid, n, 61, 1.0);
    const Trajectory hdu = f.hessian_apply(it, du);
    const double hfd = 1e-4;
    Trajectory up = it.u;
    axpy(up, hfd, du);
    Iterate itp = f.evaluate(up);
    f.prepare_derivatives(itp);
    Iterate it0 = f.evaluate(it.u);
    f.prepare_derivatives(it0);
    Trajectory fdg = itp.gradient;
    axpy(fdg, -1.0, it0.gradient);
    scale(fdg, 1.0 / hfd);
    Trajectory hdiff = fdg;
    axpy(hdiff, -1.0, hdu);
    const double hess_fd = f.norm(hdiff) / f.norm(hdu);
    ok = ok && hess_fd <= 1e-3;

    // linearized-state directional slope
    const auto ops = it.ops;
    const Trajectory z = linearized_solve(spec, ops, v, tight);
    std::vector<double> hs = {1e-3, 1e-4, 1e-5};
    std::vector<double> errs;
    const Trajectory y0 = forward_solve(spec, it.u, tight);
    for (double hh : hs) {
        Trajectory uh = it.u;
        axpy(uh, hh, v);
        const Trajectory yh = forward_solve(spec, uh, tight);
        double m = 0.0;
        for (int j = 0; j < grid.n(); ++j) {
            NodalField d = yh.fields[j];
            axpy(d, -1.0, y0.fields[j]);
            scale(d, 1.0 / hh);
            axpy(d, -1.0, z.fields[j]);
            m = std::max(m, disc->l2_norm(d));
        }
        errs.push_back(m);
    }
    const double slope = oracle::loglog_slope(hs, errs);
    ok = ok && slope >= 0.9;

    out << "grad-fd " << worst_fd << ", hess-sym " << sym << ", hess-fd " << hess_fd
        << ", lin slope " << slope << " ";
    return ok;
}

// ---- criterion 4: energy dissipation for every scenario initial shape ----

bool criterion_energy_dissipation(std::ostream& out) {
    const double eps = default_epsilon();
    auto disc = std::make_shared<Discretization>(64);
    const std::size_t n = disc->mesh.node_count();
    TimeGrid grid = TimeGrid::uniform(2e-3, 20, eps * eps);

    std::vector<std::pair<std::string, ShapeSpec>> shapes = {
        {"circle", ShapeSpec::circle({0.0, 0.0}, 0.5)},
        {"square", ShapeSpec::square({0.0, 0.0}, 0.4)},
        {"hexagon", ShapeSpec::hexagon({0.0, 0.0}, 0.45)},
        {"star4", ShapeSpec::star({0.0, 0.0}, 4, 0.25, 0.6)},
        {"star6", ShapeSpec::star({0.0, 0.0}, 6, 0.25, 0.55)},
    };
    ShapeSpec two = ShapeSpec::hexagon({0.0, 0.30}, 0.32);
    two.union_parts.push_back(ShapeSpec::hexagon({0.0, -0.30}, 0.32));
    shapes.push_back({"two-hexagons", two});

    SolverParams params;
    bool ok = true;
    for (const auto& [name, shape] : shapes) {
        ProblemSpec spec(disc, grid, l1_anisotropy(0.01, 1e-7), eps, default_lambda(),
                         make_field(shape, disc->mesh, eps), NodalField(n, 1.0));
        const Trajectory u = Trajectory::zeros(grid, n);
        const Trajectory y = forward_solve(spec, u, params);
        const NodalField* prev = &spec.y0;
        double e_prev = energy(spec, spec.y0);
        bool shape_ok = true;
        for (int j = 0; j < grid.n(); ++j) {
            NodalField d = y.fields[j];
            axpy(d, -1.0, *prev);
            const double inc = spec.epsilon / (2.0 * grid.tau(j)) * dot(d, disc->mass.apply(d));
            const double e = energy(spec, y.fields[j]);
            shape_ok = shape_ok && e + inc <= e_prev + 10.0 * params.newton_tol;
            e_prev = e;
            prev = &y.fields[j];
        }
        if (!shape_ok) out << name << " violates dissipation ";
        ok = ok && shape_ok;
    }
    return ok;
}

// ---- criterion 5: sharp-interface radius law ----

bool criterion_sharp_interface(std::ostream& out) {
    const double eps = default_epsilon();
    auto disc = std::make_shared<Discretization>(128);
    const std::size_t n = disc->mesh.node_count();
    const double horizon = 1.625e-2;
    const int steps = 50;  // t up to T/2 at the full-scale tau = 1.625e-4
    TimeGrid grid = TimeGrid::uniform(horizon / 2.0, steps, eps * eps);
    ProblemSpec spec(disc, grid, isotropic_anisotropy(), eps, default_lambda(),
                     tanh_circle(disc->mesh, 0.5, eps), NodalField(n, 1.0));

    auto radius_of = [&](const NodalField& f) {
        const int row = 64;
        for (int i = 64; i < 128; ++i) {
            const double a = f[disc->mesh.node_index(i, row)];
            const double b = f[disc->mesh.node_index(i + 1, row)];
            if (a > 0.0 && b <= 0.0) {
                const double xa = disc->mesh.coord(disc->mesh.node_index(i, row))[0];
                return xa + disc->mesh.h() * a / (a - b);
            }
        }
        return -1.0;
    };

    const Trajectory u = Trajectory::zeros(grid, n);
    const Trajectory y = forward_solve(spec, u);
    double worst = 0.0;
    for (int j = 0; j < grid.n(); ++j) {
        const double r = radius_of(y.fields[j]);
        const double exact = std::sqrt(0.25 - 2.0 * grid.time(j));
        if (r < 0.0) return false;
        worst = std::max(worst, std::abs(r - exact));
    }
    out << "max radius deviation " << worst << " (3 eps = " << 3.0 * eps << ") ";
    return worst <= 3.0 * eps;
}

// ---- criterion 6: mesh/tau independence trend ----

bool criterion_mesh_independence(std::ostream& out) {
    bool ok = true;
    struct Sweep {
        std::string name;
        ScenarioConfig cfg;
    };
    std::vector<Sweep> sweeps;
    {
        ScenarioConfig cfg = desk_config();
        cfg.aniso_name = "isotropic";
        cfg.initial = ShapeSpec::circle({0.0, 0.0}, 0.5);
        cfg.target = ShapeSpec::circle({0.0, 0.0}, 0.55);
        sweeps.push_back({"growing-circle", cfg});
    }
    {
        ScenarioConfig cfg = desk_config();
        cfg.aniso_name = "l1";
        cfg.initial = ShapeSpec::square({0.0, 0.0}, 0.4);
        cfg.target = cfg.initial;
        sweeps.push_back({"keep-square", cfg});
    }
    for (auto& sweep : sweeps) {
        std::vector<GranularityRow> rows =
            granularity_study(sweep.cfg, "mesh", {32.0, 64.0, 128.0});
        const auto tau_rows =
            granularity_study(sweep.cfg, "tau", {1e-4, std::pow(10.0, -4.5)});
        rows.insert(rows.end(), tau_rows.begin() + 1, tau_rows.end());  // 64/1e-4 repeats
        double tr_min = 1e300, tr_max = 0.0, cg_min = 1e300, cg_max = 0.0;
        for (const auto& r : rows) {
            ok = ok && !r.failed;
            tr_min = std::min(tr_min, static_cast<double>(r.tr_steps));
            tr_max = std::max(tr_max, static_cast<double>(r.tr_steps));
            cg_min = std::min(cg_min, r.mean_cg);
            cg_max = std::max(cg_max, r.mean_cg);
        }
        out << sweep.name << " TR " << tr_min << ".." << tr_max << " CG " << cg_min << ".."
            << cg_max << " ";
        ok = ok && tr_max < 2.0 * tr_min && cg_max < 2.0 * cg_min;
    }
    return ok;
}

// ---- criterion 7: qualitative control structure ----

bool criterion_control_structure(std::ostream& out) {
    bool ok = true;
    {
        // The late-control profile needs the full horizon: the early work is
        // done by the nearly uncontrolled flow, which moves nothing within a
        // 2e-3 horizon (there the optimum spreads the effort evenly). Desk
        // mesh, full-scale horizon.
        ScenarioConfig cfg = desk_config();
        cfg.horizon = 1.625e-2;
        cfg.tau = 1.625e-4;
        cfg.aniso_name = "l1";
        cfg.initial = ShapeSpec::circle({0.0, 0.0}, 0.5);
        cfg.target = ShapeSpec::star({0.0, 0.0}, 4, 0.25, 0.6);
        cfg.tr.max_outer = 200;
        BuiltProblem built = build_problem(cfg);
        const MinimizeResult res = minimize(
            built.spec, Trajectory::zeros(built.spec.grid, built.spec.n_nodes()), cfg.tr,
            cfg.solver);
        ok = ok && !res.failed;
        const TimeGrid& grid = built.spec.grid;
        double first = 0.0, last = 0.0;
        int nf = 0, nl = 0;
        for (int j = 0; j < grid.n(); ++j) {
            const double un = built.disc->l2_norm(res.control.fields[j]);
            if (grid.time(j) <= grid.horizon() / 2.0) {
                first += un;
                ++nf;
            }
            if (grid.time(j) >= 0.75 * grid.horizon()) {
                last += un;
                ++nl;
            }
        }
        first /= nf;
        last /= nl;
        out << "star mean|u| first-half " << first << " vs last-quarter " << last << " ";
        ok = ok && first < last;
    }
    {
        ShapeSpec one = ShapeSpec::hexagon({0.0, 0.0}, 0.45);
        ShapeSpec two = ShapeSpec::hexagon({0.0, 0.30}, 0.32);
        two.union_parts.push_back(ShapeSpec::hexagon({0.0, -0.30}, 0.32));

        auto run = [&](const ShapeSpec& from, const ShapeSpec& to) {
            ScenarioConfig cfg = desk_config();
            cfg.aniso_name = "hexagon";
            cfg.initial = from;
            cfg.target = to;
            cfg.tr.max_outer = 150;
            BuiltProblem built = build_problem(cfg);
            const MinimizeResult res = minimize(
                built.spec, Trajectory::zeros(built.spec.grid, built.spec.n_nodes()), cfg.tr,
                cfg.solver);
            return std::pair<bool, double>(!res.failed, res.report.final_j2);
        };
        const auto [ok_split, j2_split] = run(one, two);
        const auto [ok_merge, j2_merge] = run(two, one);
        out << "split j2 " << j2_split << " vs merge j2 " << j2_merge << " ";
        ok = ok && ok_split && ok_merge && j2_split / j2_merge > 1.2;
    }
    return ok;
}

// ---- criterion 8: adjoint duality identity ----

bool criterion_duality(std::ostream& out) {
    auto disc = std::make_shared<Discretization>(16);
    const std::size_t n = disc->mesh.node_count();
    const double eps = default_epsilon();
    TimeGrid grid = TimeGrid::uniform(5e-4, 5, eps * eps);
    ProblemSpec spec(disc, grid, hexagon_anisotropy(0.01, 1e-7), eps, default_lambda(),
                     tanh_circle(disc->mesh, 0.5, eps), tanh_circle(disc->mesh, 0.45, eps));
    SolverParams params;
    const Trajectory u = random_trajectory(grid, n, 11, 0.5);
    const Trajectory y = forward_solve(spec, u, params);
    const auto ops = assemble_step_operators(spec, y, params);
    const Trajectory p = adjoint_solve(spec, ops, y, params);
    NodalField mismatch = y.fields.back();
    axpy(mismatch, -1.0, spec.y_target);

    double worst = 0.0;
    for (unsigned seed = 0; seed < 10; ++seed) {
        const Trajectory v = random_trajectory(grid, n, 100 + seed, 1.0);
        const Trajectory z = linearized_solve(spec, ops, v, params);
        const double lhs = dot(mismatch, disc->mass.apply(z.fields.back()));
        double rhs = 0.0;
        for (int j = 0; j < grid.n(); ++j)
            rhs += grid.tau(j) * dot(p.fields[j], disc->mass.apply(v.fields[j]));
        rhs /= spec.epsilon;
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    out << "worst relative mismatch " << worst << " ";
    return worst <= 1e-8;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    const std::vector<Criterion> criteria = {
        {1, "delta-convergence rate 1/2 (L2 slope in [0.4, 0.6])", criterion_delta_rate},
        {2, "anisotropy derivative bounds, uniform in delta", criterion_lemma_suite},
        {3, "reduced gradient/Hessian consistency", criterion_derivative_consistency},
        {4, "energy dissipation for every scenario shape", criterion_energy_dissipation},
        {5, "sharp-interface radius law within 3 eps", criterion_sharp_interface},
        {6, "mesh/tau-independent iteration counts (factor < 2)", criterion_mesh_independence},
        {7, "control structure: late control, split dearer than merge",
         criterion_control_structure},
        {8, "adjoint duality identity to 1e-8", criterion_duality},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.number)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::ostringstream detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what() << " ";
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d: %s [%s%.1fs]\n", ok ? "PASS" : "FAIL", c.number,
                    c.title.c_str(), detail.str().c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
