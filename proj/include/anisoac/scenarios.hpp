#pragma once
// Scenario configuration, the experiment suite (optimal-control runs, the
// delta-convergence study, mesh/tau granularity studies, Wulff shapes) and
// all file output.

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "anisoac/config.hpp"
#include "anisoac/io.hpp"
#include "anisoac/optimizer.hpp"
#include "anisoac/shapes.hpp"

namespace anisoac {

struct ScenarioConfig {
    // problem
    double epsilon = default_epsilon();
    double lambda = default_lambda();
    double delta = default_delta();
    double horizon = 2e-3;   // desk-scale default; --paper-scale switches to 1.625e-2
    double tau = 1e-4;       // target step size; the grid uses round(T/tau) steps
    int n_steps = 0;         // explicit step count wins over tau when > 0
    int n_div = 64;
    // anisotropy
    std::string aniso_name = "isotropic";
    double eps_aniso = 0.01;
    std::vector<Mat<2>> custom_matrices;
    // shapes
    ShapeSpec initial = ShapeSpec::circle({0.0, 0.0}, 0.5);
    ShapeSpec target = ShapeSpec::circle({0.0, 0.0}, 0.5);
    // solvers
    TrustRegionConfig tr;
    SolverParams solver;
    // output/run
    std::string out_dir = "out";
    int snapshot_frames = 8;
    bool write_vtk = false;
    bool deterministic = true;
    int threads = 1;

    int resolved_steps() const {
        if (n_steps > 0) return n_steps;
        return std::max(1, static_cast<int>(std::lround(horizon / tau)));
    }

    AnisotropySpec<2> anisotropy(double with_delta) const {
        if (aniso_name == "custom") {
            if (custom_matrices.empty())
                throw ConfigError("custom anisotropy needs at least one matrix");
            return AnisotropySpec<2>(custom_matrices, with_delta);
        }
        return named_anisotropy(aniso_name, eps_aniso, with_delta);
    }

    void validate() const {
        const double tau_eff = horizon / resolved_steps();
        if (tau_eff >= epsilon * epsilon / DoubleWell::c_psi)
            throw ConfigError("time step " + std::to_string(tau_eff) +
                              " violates tau < eps^2/C_psi");
        const double margin = 3.0 * epsilon;
        if (detail::max_extent(initial) > 1.0 - margin)
            throw ConfigError("initial shape must fit inside the domain with margin 3 eps");
        if (detail::max_extent(target) > 1.0 - margin)
            throw ConfigError("target shape must fit inside the domain with margin 3 eps");
        anisotropy(delta);  // validates matrices and delta
        tr.validate();
    }
};

namespace detail {

inline ShapeSpec parse_shape_section(const ConfigFile& cfg, const std::string& section) {
    const std::string kind = cfg.text(section, "shape", "");
    if (kind.empty()) throw ConfigError("section [" + section + "] needs a 'shape' key");
    ShapeSpec s;
    auto center = cfg.numbers(section, "center").value_or(std::vector<double>{0.0, 0.0});
    if (center.size() != 2) throw ConfigError("[" + section + "] center must be [x, y]");
    const Vec<2> c{center[0], center[1]};
    if (kind == "circle") {
        s = ShapeSpec::circle(c, cfg.number(section, "radius", 0.5));
    } else if (kind == "square") {
        s = ShapeSpec::square(c, cfg.number(section, "half_width", 0.4));
    } else if (kind == "hexagon") {
        s = ShapeSpec::hexagon(c, cfg.number(section, "radius", 0.45));
    } else if (kind == "star") {
        s = ShapeSpec::star(c, static_cast<int>(cfg.number(section, "k", 4)),
                            cfg.number(section, "r_inner", 0.25),
                            cfg.number(section, "r_outer", 0.6));
        if (s.petals != 4 && s.petals != 6)
            throw ConfigError("[" + section + "] star k must be 4 or 6");
    } else if (kind == "full") {
        s = ShapeSpec::full_domain();
    } else {
        throw ConfigError("[" + section + "] unknown shape '" + kind + "'");
    }
    return s;
}

inline ShapeSpec parse_shape(const ConfigFile& cfg, const std::string& section) {
    ShapeSpec root = parse_shape_section(cfg, section);
    // union parts live in [section.union], [section.union2], ...
    for (const std::string& name : cfg.section_names()) {
        if (name.rfind(section + ".union", 0) == 0)
            root.union_parts.push_back(parse_shape_section(cfg, name));
    }
    return root;
}

}  // namespace detail

// paper_scale swaps in the full-resolution defaults; explicit file keys win
inline ScenarioConfig scenario_from_config(const ConfigFile& cfg, bool paper_scale = false) {
    ScenarioConfig s;
    if (paper_scale) {
        s.n_div = 128;
        s.horizon = 1.625e-2;
        s.tau = 1.625e-4;
    }
    s.epsilon = cfg.number("problem", "epsilon", s.epsilon);
    s.lambda = cfg.number("problem", "lambda", s.lambda);
    s.delta = cfg.number("problem", "delta", s.delta);
    s.horizon = cfg.number("problem", "T", s.horizon);
    s.tau = cfg.number("problem", "tau", s.tau);
    s.n_steps = static_cast<int>(cfg.number("problem", "n_steps", 0));
    s.n_div = static_cast<int>(cfg.number("problem", "n_div", s.n_div));

    s.aniso_name = cfg.text("anisotropy", "name", s.aniso_name);
    s.eps_aniso = cfg.number("anisotropy", "eps_aniso", s.eps_aniso);
    for (int i = 1;; ++i) {
        const auto m = cfg.numbers("anisotropy", "matrix" + std::to_string(i));
        if (!m) break;
        if (m->size() != 4)
            throw ConfigError("anisotropy matrix" + std::to_string(i) +
                              " must be [a11, a12, a21, a22]");
        s.custom_matrices.push_back(Mat<2>{{{(*m)[0], (*m)[1]}, {(*m)[2], (*m)[3]}}});
    }

    if (cfg.has_section("initial")) s.initial = detail::parse_shape(cfg, "initial");
    if (cfg.has_section("target")) s.target = detail::parse_shape(cfg, "target");

    s.tr.initial_radius = cfg.number("optimizer", "radius0", s.tr.initial_radius);
    s.tr.max_radius = cfg.number("optimizer", "max_radius", s.tr.max_radius);
    s.tr.eta_accept = cfg.number("optimizer", "eta1", s.tr.eta_accept);
    s.tr.eta_expand = cfg.number("optimizer", "eta2", s.tr.eta_expand);
    s.tr.shrink = cfg.number("optimizer", "shrink", s.tr.shrink);
    s.tr.expand = cfg.number("optimizer", "expand", s.tr.expand);
    s.tr.gtol_rel = cfg.number("optimizer", "gtol_rel", s.tr.gtol_rel);
    s.tr.gtol_abs = cfg.number("optimizer", "gtol_abs", s.tr.gtol_abs);
    s.tr.max_outer = static_cast<int>(cfg.number("optimizer", "max_outer", s.tr.max_outer));
    s.tr.cg_rel_tol = cfg.number("optimizer", "cg_tol", s.tr.cg_rel_tol);
    s.tr.cg_max_iter = static_cast<int>(cfg.number("optimizer", "cg_max_iter", s.tr.cg_max_iter));

    s.solver.newton_tol = cfg.number("solver", "newton_tol", s.solver.newton_tol);
    s.solver.newton_max_iter =
        static_cast<int>(cfg.number("solver", "newton_max_iter", s.solver.newton_max_iter));
    s.solver.cg_tol_forward = cfg.number("solver", "cg_tol_forward", s.solver.cg_tol_forward);
    s.solver.cg_tol_sensitivity =
        cfg.number("solver", "cg_tol_sensitivity", s.solver.cg_tol_sensitivity);

    s.out_dir = cfg.text("output", "dir", s.out_dir);
    s.snapshot_frames = static_cast<int>(cfg.number("output", "frames", s.snapshot_frames));
    s.write_vtk = cfg.boolean("output", "vtk", s.write_vtk);
    s.deterministic = cfg.boolean("run", "deterministic", s.deterministic);
    s.threads = static_cast<int>(cfg.number("run", "threads", s.threads));
    return s;
}

// ---- problem construction ----

struct BuiltProblem {
    std::shared_ptr<const Discretization> disc;
    ProblemSpec spec;
};

inline BuiltProblem build_problem(const ScenarioConfig& cfg, double delta_override = -1.0,
                                  int n_div_override = 0, double tau_override = 0.0) {
    const double delta = delta_override >= 0.0 ? delta_override : cfg.delta;
    const int n_div = n_div_override > 0 ? n_div_override : cfg.n_div;
    auto disc = std::make_shared<Discretization>(n_div);
    int steps = cfg.resolved_steps();
    if (tau_override > 0.0)
        steps = std::max(1, static_cast<int>(std::lround(cfg.horizon / tau_override)));
    TimeGrid grid = TimeGrid::uniform(cfg.horizon, steps,
                                      cfg.epsilon * cfg.epsilon / DoubleWell::c_psi);
    NodalField y0 = make_field(cfg.initial, disc->mesh, cfg.epsilon);
    NodalField target = make_field(cfg.target, disc->mesh, cfg.epsilon);
    ProblemSpec spec(disc, std::move(grid), cfg.anisotropy(delta), cfg.epsilon, cfg.lambda,
                     std::move(y0), std::move(target));
    return {disc, std::move(spec)};
}

// ---- Wulff shape sampling (delta = 0 density) ----

// boundary points e_theta / gamma*(e_theta) of the dual-norm unit ball
inline std::vector<Vec<2>> wulff_shape(const AnisotropySpec<2>& aniso, int n_angles) {
    const AnisotropySpec<2> a0 = aniso.with_delta(0.0);
    auto gamma = [&](double phi) {
        const Vec<2> p{std::cos(phi), std::sin(phi)};
        return std::sqrt(2.0 * a0.value(p));
    };
    std::vector<Vec<2>> polygon;
    polygon.reserve(n_angles);
    const int coarse = 4096;
    for (int k = 0; k < n_angles; ++k) {
        const double theta = 2.0 * M_PI * k / n_angles;
        const Vec<2> e{std::cos(theta), std::sin(theta)};
        auto ratio = [&](double phi) {
            return (e[0] * std::cos(phi) + e[1] * std::sin(phi)) / gamma(phi);
        };
        double best_phi = 0.0, best = -1e300;
        for (int i = 0; i < coarse; ++i) {
            const double phi = 2.0 * M_PI * i / coarse;
            const double r = ratio(phi);
            if (r > best) {
                best = r;
                best_phi = phi;
            }
        }
        // golden-section refinement around the coarse maximizer
        double lo = best_phi - 2.0 * M_PI / coarse;
        double hi = best_phi + 2.0 * M_PI / coarse;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        for (int it = 0; it < 60; ++it) {
            if (ratio(x1) < ratio(x2)) {
                lo = x1;
                x1 = x2;
                x2 = lo + gr * (hi - lo);
            } else {
                hi = x2;
                x2 = x1;
                x1 = hi - gr * (hi - lo);
            }
        }
        const double dual = std::max(best, ratio(0.5 * (lo + hi)));
        polygon.push_back({e[0] / dual, e[1] / dual});
    }
    return polygon;
}

// ---- studies and runs ----

struct DeltaStudyRow {
    double delta;
    double err_l2;
    double err_h1;
    bool failed = false;
};

struct DeltaStudyResult {
    std::vector<DeltaStudyRow> rows;
    double slope_l2 = 0.0;  // log-log least-squares fit over the non-reference rows
    double slope_h1 = 0.0;
};

inline DeltaStudyResult delta_study(const ScenarioConfig& cfg, const std::vector<double>& deltas,
                                    double reference_delta = 0.0) {
    BuiltProblem ref = build_problem(cfg, reference_delta);
    const Trajectory u0 = Trajectory::zeros(ref.spec.grid, ref.spec.n_nodes());
    const Trajectory y_ref = forward_solve(ref.spec, u0, cfg.solver);
    const NodalField& terminal_ref = y_ref.fields.back();

    DeltaStudyResult res;
    std::vector<double> xs, ys_l2, ys_h1;
    for (double delta : deltas) {
        DeltaStudyRow row{delta, 0.0, 0.0};
        if (delta == reference_delta) {
            res.rows.push_back(row);
            continue;
        }
        try {
            BuiltProblem run = build_problem(cfg, delta);
            const Trajectory y = forward_solve(run.spec, u0, cfg.solver);
            NodalField diff = y.fields.back();
            axpy(diff, -1.0, terminal_ref);
            row.err_l2 = ref.disc->l2_norm(diff);
            row.err_h1 = ref.disc->h1_norm(diff);
            if (row.err_l2 > 0.0) {
                xs.push_back(delta);
                ys_l2.push_back(row.err_l2);
                ys_h1.push_back(row.err_h1);
            }
        } catch (const SolverError&) {
            row.failed = true;
        }
        res.rows.push_back(row);
    }
    if (xs.size() >= 2) {
        auto slope = [](const std::vector<double>& x, const std::vector<double>& y) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double lx = std::log(x[i]), ly = std::log(y[i]);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
            }
            return (n * sxy - sx * sy) / (n * sxx - sx * sx);
        };
        res.slope_l2 = slope(xs, ys_l2);
        res.slope_h1 = slope(xs, ys_h1);
    }
    return res;
}

inline void write_delta_study_csv(const std::filesystem::path& path, const DeltaStudyResult& res) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : res.rows)
        rows.push_back({csv_num(r.delta), csv_num(r.err_l2), csv_num(r.err_h1),
                        r.failed ? "1" : "0"});
    write_csv(path, "delta,err_l2,err_h1,failed", rows);
}

struct GranularityRow {
    double value;  // n_div or tau
    int max_cg = 0;
    double mean_cg = 0.0;
    int tr_steps = 0;
    double time_s = 0.0;
    double j = 0.0;
    bool failed = false;
};

inline std::vector<GranularityRow> granularity_study(const ScenarioConfig& cfg,
                                                     const std::string& axis,
                                                     const std::vector<double>& values) {
    if (axis != "mesh" && axis != "tau") throw ConfigError("study axis must be 'mesh' or 'tau'");
    std::vector<GranularityRow> rows;
    for (double v : values) {
        GranularityRow row{v};
        try {
            BuiltProblem built = axis == "mesh"
                                     ? build_problem(cfg, -1.0, static_cast<int>(v))
                                     : build_problem(cfg, -1.0, 0, v);
            const Trajectory u0 = Trajectory::zeros(built.spec.grid, built.spec.n_nodes());
            const MinimizeResult res = minimize(built.spec, u0, cfg.tr, cfg.solver);
            row.max_cg = res.report.max_cg;
            row.mean_cg = res.report.mean_cg;
            row.tr_steps = res.report.tr_steps;
            row.time_s = res.report.wall_time_s;
            row.j = res.report.final_j;
            row.failed = res.failed;
        } catch (const SolverError&) {
            row.failed = true;
        }
        rows.push_back(row);
    }
    return rows;
}

inline void write_granularity_csv(const std::filesystem::path& path, const std::string& axis,
                                  const std::vector<GranularityRow>& rows) {
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows)
        out.push_back({csv_num(r.value), std::to_string(r.max_cg), csv_num(r.mean_cg),
                       std::to_string(r.tr_steps), csv_num(r.time_s), csv_num(r.j),
                       r.failed ? "1" : "0"});
    write_csv(path, axis + ",max_cg,mean_cg,tr_steps,time_s,j,failed", out);
}

inline void write_report_csv(const std::filesystem::path& path, const TrustRegionReport& rep) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& it : rep.iterations)
        rows.push_back({std::to_string(it.iter), csv_num(it.j), csv_num(it.j1), csv_num(it.j2),
                        csv_num(it.gradient_norm), csv_num(it.radius),
                        std::to_string(it.cg_iterations), it.accepted ? "1" : "0"});
    write_csv(path, "iter,j,j1,j2,gnorm,delta,cg_iters,accepted", rows);
}

inline std::string format_summary(const TrustRegionReport& rep) {
    std::ostringstream out;
    out << "max CG    " << rep.max_cg << "\n";
    out << "mean CG   " << rep.mean_cg << "\n";
    out << "TR steps  " << rep.tr_steps << "\n";
    out << "time (s)  " << rep.wall_time_s << "\n";
    out << "j         " << csv_num(rep.final_j) << "\n";
    out << "j1        " << csv_num(rep.final_j1) << "\n";
    out << "j2        " << csv_num(rep.final_j2) << "\n";
    out << "gnorm     " << csv_num(rep.final_gradient_norm) << "\n";
    out << "stop      " << rep.termination << "\n";
    return out.str();
}

struct ScenarioResult {
    TrustRegionReport report;
    CostBreakdown final_cost;
    std::vector<double> u_norm_times;   // t_j
    std::vector<double> u_norm_values;  // ||u_j||_{L2(Omega)}
    bool failed = false;
    std::vector<std::string> files;
};

// Executes the optimal-control run and writes the artifact bundle:
// 8 state/control snapshots, the ||u(t)|| time series, the cost breakdown,
// the optimizer report and, last, the manifest. Partial outputs are flushed
// even when the optimizer aborts.
ScenarioResult run_scenario(const ScenarioConfig& cfg);  // defined in scenarios_run.hpp

}  // namespace anisoac

#include "anisoac/scenarios_run.hpp"
