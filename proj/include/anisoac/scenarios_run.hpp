#pragma once
// run_scenario implementation; split out to keep scenarios.hpp readable.

#include <chrono>
#include <filesystem>

#include <json.hpp>

#include "anisoac/scenarios.hpp"

namespace anisoac {

namespace detail {

inline nlohmann::json shape_json(const ShapeSpec& s) {
    static const char* names[] = {"circle", "square", "hexagon", "star", "full"};
    nlohmann::json j;
    j["shape"] = names[static_cast<int>(s.kind)];
    j["center"] = {s.center[0], s.center[1]};
    j["radius"] = s.radius;
    if (s.kind == ShapeSpec::Kind::star) {
        j["k"] = s.petals;
        j["r_inner"] = s.r_inner;
        j["r_outer"] = s.r_outer;
    }
    for (const auto& part : s.union_parts) j["union"].push_back(shape_json(part));
    return j;
}

inline nlohmann::json config_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["problem"] = {{"epsilon", cfg.epsilon}, {"lambda", cfg.lambda},   {"delta", cfg.delta},
                    {"T", cfg.horizon},       {"tau", cfg.tau},         {"n_steps", cfg.resolved_steps()},
                    {"n_div", cfg.n_div}};
    j["anisotropy"] = {{"name", cfg.aniso_name}, {"eps_aniso", cfg.eps_aniso}};
    j["initial"] = shape_json(cfg.initial);
    j["target"] = shape_json(cfg.target);
    j["optimizer"] = {{"radius0", cfg.tr.initial_radius}, {"max_radius", cfg.tr.max_radius},
                      {"eta1", cfg.tr.eta_accept},        {"eta2", cfg.tr.eta_expand},
                      {"shrink", cfg.tr.shrink},          {"expand", cfg.tr.expand},
                      {"gtol_rel", cfg.tr.gtol_rel},      {"gtol_abs", cfg.tr.gtol_abs},
                      {"max_outer", cfg.tr.max_outer},    {"cg_tol", cfg.tr.cg_rel_tol},
                      {"cg_max_iter", cfg.tr.cg_max_iter}};
    j["solver"] = {{"newton_tol", cfg.solver.newton_tol},
                   {"cg_tol_forward", cfg.solver.cg_tol_forward},
                   {"cg_tol_sensitivity", cfg.solver.cg_tol_sensitivity}};
    j["run"] = {{"deterministic", cfg.deterministic}, {"threads", cfg.threads}};
    j["output"] = {{"dir", cfg.out_dir}, {"frames", cfg.snapshot_frames}, {"vtk", cfg.write_vtk}};
    return j;
}

}  // namespace detail

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    namespace fs = std::filesystem;
    const auto t_start = std::chrono::steady_clock::now();
    cfg.validate();
    set_thread_count(cfg.deterministic ? 1 : cfg.threads);
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);

    ScenarioResult result;
    auto track = [&](const fs::path& p) { result.files.push_back(p.string()); };

    BuiltProblem built = build_problem(cfg);
    ProblemSpec& spec = built.spec;
    const Trajectory u0 = Trajectory::zeros(spec.grid, spec.n_nodes());

    MinimizeResult opt = minimize(spec, u0, cfg.tr, cfg.solver);
    result.report = opt.report;
    result.failed = opt.failed;

    write_report_csv(dir / "report.csv", opt.report);
    track(dir / "report.csv");
    write_file_atomic(dir / "summary.txt", format_summary(opt.report));
    track(dir / "summary.txt");

    if (!opt.failed) {
        std::vector<std::vector<std::string>> diag_rows;
        const Trajectory y = forward_solve(spec, opt.control, cfg.solver,
                                           [&](const StepDiagnostics& d) {
                                               diag_rows.push_back(
                                                   {std::to_string(d.step + 1), csv_num(d.t),
                                                    std::to_string(d.newton_iters),
                                                    csv_num(d.residual), csv_num(d.energy)});
                                           });
        write_csv(dir / "state_diagnostics.csv", "step,t,newton_iters,residual,energy",
                  diag_rows);
        track(dir / "state_diagnostics.csv");
        result.final_cost = cost(spec, y, opt.control);

        // ||u(t,.)|| time series
        std::vector<std::vector<std::string>> unorm_rows;
        for (int j = 0; j < spec.grid.n(); ++j) {
            const double un = spec.disc->l2_norm(opt.control.fields[j]);
            result.u_norm_times.push_back(spec.grid.time(j));
            result.u_norm_values.push_back(un);
            unorm_rows.push_back(
                {std::to_string(j + 1), csv_num(spec.grid.time(j)), csv_num(un)});
        }
        write_csv(dir / "u_norm.csv", "step,t,u_l2", unorm_rows);
        track(dir / "u_norm.csv");

        write_csv(dir / "cost.csv", "j,j1,j2",
                  {{csv_num(result.final_cost.j), csv_num(result.final_cost.j1),
                    csv_num(result.final_cost.j2)}});
        track(dir / "cost.csv");

        // evenly spaced frames over the trajectory, mirrors the figure strips
        const int frames = std::max(2, cfg.snapshot_frames);
        char name[64];
        for (int k = 0; k < frames; ++k) {
            const int j = static_cast<int>(std::lround(
                static_cast<double>(k) * (spec.grid.n() - 1) / (frames - 1)));
            std::snprintf(name, sizeof(name), "state_%04d.txt", k);
            write_field_snapshot(dir / name, y.fields[j], cfg.n_div, spec.grid.time(j));
            track(dir / name);
            std::snprintf(name, sizeof(name), "control_%04d.txt", k);
            write_field_snapshot(dir / name, opt.control.fields[j], cfg.n_div,
                                 spec.grid.time(j));
            track(dir / name);
            if (cfg.write_vtk) {
                std::snprintf(name, sizeof(name), "state_%04d.vtk", k);
                write_vtk_snapshot(dir / name, y.fields[j], cfg.n_div);
                track(dir / name);
            }
        }
    }

    // manifest is always the last file written
    nlohmann::json manifest;
    manifest["config"] = detail::config_json(cfg);
    manifest["status"] = result.failed ? "solver_failure" : "ok";
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    manifest["optimizer"] = {{"tr_steps", result.report.tr_steps},
                             {"accepted_steps", result.report.accepted_steps},
                             {"max_cg", result.report.max_cg},
                             {"mean_cg", result.report.mean_cg},
                             {"termination", result.report.termination},
                             {"time_s", result.report.wall_time_s}};
    for (const std::string& f : result.files) {
        manifest["files"].push_back(
            {{"path", f},
             {"bytes", static_cast<std::uint64_t>(fs::file_size(f))},
             {"fnv1a64", fnv1a64_file(f)}});
    }
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    result.files.push_back((dir / "manifest.json").string());
    return result;
}

}  // namespace anisoac
