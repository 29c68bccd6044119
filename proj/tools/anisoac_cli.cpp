// Command-line front end: scenario runs, the delta and granularity studies,
// Wulff-shape sampling and field generation. Logs go to stderr; machine
// output goes to files only. Exit codes: 0 ok, 1 configuration error,
// 2 solver failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "anisoac/scenarios.hpp"

namespace {

bool g_verbose = false;

void log_info(const std::string& msg) { std::cerr << "[info] " << msg << "\n"; }
void log_debug(const std::string& msg) {
    if (g_verbose) std::cerr << "[debug] " << msg << "\n";
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw anisoac::ConfigError("empty value list '" + csv + "'");
    return out;
}

int env_threads() {
    if (const char* v = std::getenv("ANISO_AC_THREADS")) {
        const int n = std::atoi(v);
        if (n >= 1) return n;
    }
    return 1;
}

struct CommonFlags {
    std::string out_dir;
    bool deterministic = false;
    bool paper_scale = false;
    int threads = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory (overrides the config file)");
        cmd->add_flag("--deterministic", deterministic, "force single-threaded execution");
        cmd->add_option("--threads", threads, "worker thread count");
        cmd->add_flag("--paper-scale", paper_scale,
                      "full-resolution defaults (n_div=128, T=1.625e-2, tau=1.625e-4)");
    }

    void apply(anisoac::ScenarioConfig& cfg) const {
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (threads > 0) {
            cfg.threads = threads;
            cfg.deterministic = threads == 1;
        }
        if (deterministic) {
            cfg.deterministic = true;
            cfg.threads = 1;
        }
        anisoac::set_thread_count(cfg.deterministic ? 1 : cfg.threads);
    }
};

anisoac::ScenarioConfig load_scenario(const std::string& path, const CommonFlags& flags) {
    const anisoac::ConfigFile file = anisoac::ConfigFile::parse_file(path);
    anisoac::ScenarioConfig cfg = anisoac::scenario_from_config(file, flags.paper_scale);
    cfg.threads = std::max(cfg.threads, env_threads());
    flags.apply(cfg);
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisoac: optimal control of anisotropic Allen-Cahn equations"};
    app.require_subcommand(1);
    app.add_flag("--verbose", g_verbose, "debug logging to stderr");

    std::string config_path, axis = "mesh", values_csv, deltas_csv;
    double reference_delta = 0.0;

    auto* run_cmd = app.add_subcommand("run", "solve one optimal-control scenario");
    run_cmd->add_option("config", config_path, "scenario configuration file")->required();
    CommonFlags run_flags;
    run_flags.attach(run_cmd);

    auto* delta_cmd = app.add_subcommand(
        "delta-study", "uncontrolled forward error against the delta=0 reference");
    delta_cmd->add_option("config", config_path, "scenario configuration file")->required();
    delta_cmd->add_option("--deltas", deltas_csv, "comma-separated regularization shifts")
        ->required();
    delta_cmd->add_option("--reference-delta", reference_delta, "reference shift (default 0)");
    CommonFlags delta_flags;
    delta_flags.attach(delta_cmd);

    auto* gran_cmd = app.add_subcommand("granularity-study",
                                        "optimizer iteration counts across mesh or step sizes");
    gran_cmd->add_option("config", config_path, "scenario configuration file")->required();
    gran_cmd->add_option("--axis", axis, "mesh | tau")->required();
    gran_cmd->add_option("--values", values_csv, "comma-separated n_div or tau values")
        ->required();
    CommonFlags gran_flags;
    gran_flags.attach(gran_cmd);

    std::string aniso_name = "isotropic";
    int wulff_n = 720;
    double eps_aniso = 0.01;
    auto* wulff_cmd = app.add_subcommand("wulff", "sample the Wulff shape of a named anisotropy");
    wulff_cmd->add_option("aniso", aniso_name, "isotropic | l1 | hexagon")->required();
    wulff_cmd->add_option("--n", wulff_n, "number of boundary samples");
    wulff_cmd->add_option("--eps-aniso", eps_aniso, "anisotropy strength parameter");
    CommonFlags wulff_flags;
    wulff_flags.attach(wulff_cmd);

    std::string shape_name = "circle", center_csv = "0,0", out_file;
    double radius = 0.5, half_width = 0.4, r_inner = 0.25, r_outer = 0.6, epsilon = 0.0;
    int star_k = 4, n_div = 64;
    bool field_vtk = false;
    auto* field_cmd = app.add_subcommand("make-field", "write a tanh profile field snapshot");
    field_cmd->add_option("--shape", shape_name, "circle | square | hexagon | star | full")
        ->required();
    field_cmd->add_option("--center", center_csv, "cx,cy");
    field_cmd->add_option("--radius", radius, "circle/hexagon radius");
    field_cmd->add_option("--half-width", half_width, "square half-width");
    field_cmd->add_option("--k", star_k, "star petal count (4 or 6)");
    field_cmd->add_option("--r-inner", r_inner, "star inner radius");
    field_cmd->add_option("--r-outer", r_outer, "star outer radius");
    field_cmd->add_option("--n-div", n_div, "mesh divisions per axis");
    field_cmd->add_option("--epsilon", epsilon, "interface parameter (default 1/(14 pi))");
    field_cmd->add_option("--out-file", out_file, "output path (default <out>/field.txt)");
    field_cmd->add_flag("--vtk", field_vtk, "also write a .vtk copy");
    CommonFlags field_flags;
    field_flags.attach(field_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints usage, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*run_cmd) {
            const anisoac::ScenarioConfig cfg = load_scenario(config_path, run_flags);
            log_info("running scenario (" + cfg.aniso_name + ", n_div=" +
                     std::to_string(cfg.n_div) + ", steps=" +
                     std::to_string(cfg.resolved_steps()) + ") -> " + cfg.out_dir);
            const anisoac::ScenarioResult res = anisoac::run_scenario(cfg);
            log_info("TR steps " + std::to_string(res.report.tr_steps) + ", mean CG " +
                     std::to_string(res.report.mean_cg) + ", stop " + res.report.termination);
            if (res.failed) {
                log_info("solver failure; partial outputs in " + cfg.out_dir);
                return 2;
            }
            return 0;
        }
        if (*delta_cmd) {
            anisoac::ScenarioConfig cfg = load_scenario(config_path, delta_flags);
            const std::vector<double> deltas = parse_list(deltas_csv);
            log_info("delta study over " + std::to_string(deltas.size()) + " shifts");
            const anisoac::DeltaStudyResult res =
                anisoac::delta_study(cfg, deltas, reference_delta);
            std::filesystem::create_directories(cfg.out_dir);
            anisoac::write_delta_study_csv(
                std::filesystem::path(cfg.out_dir) / "delta_study.csv", res);
            anisoac::write_csv(std::filesystem::path(cfg.out_dir) / "delta_study_slopes.csv",
                               "norm,slope",
                               {{"L2", anisoac::csv_num(res.slope_l2)},
                                {"H1", anisoac::csv_num(res.slope_h1)}});
            log_info("L2 slope " + std::to_string(res.slope_l2) + ", H1 slope " +
                     std::to_string(res.slope_h1));
            for (const auto& row : res.rows)
                if (row.failed) return 2;
            return 0;
        }
        if (*gran_cmd) {
            anisoac::ScenarioConfig cfg = load_scenario(config_path, gran_flags);
            const std::vector<double> values = parse_list(values_csv);
            log_info("granularity study, axis " + axis);
            const auto rows = anisoac::granularity_study(cfg, axis, values);
            std::filesystem::create_directories(cfg.out_dir);
            anisoac::write_granularity_csv(
                std::filesystem::path(cfg.out_dir) / ("granularity_" + axis + ".csv"), axis,
                rows);
            for (const auto& row : rows)
                if (row.failed) return 2;
            return 0;
        }
        if (*wulff_cmd) {
            anisoac::ScenarioConfig cfg;  // defaults only; no config file needed here
            wulff_flags.apply(cfg);
            const auto aniso = anisoac::named_anisotropy(aniso_name, eps_aniso, 0.0);
            const auto polygon = anisoac::wulff_shape(aniso, wulff_n);
            std::filesystem::create_directories(cfg.out_dir);
            std::vector<std::vector<std::string>> rows;
            for (const auto& p : polygon)
                rows.push_back({anisoac::csv_num(p[0]), anisoac::csv_num(p[1])});
            const auto path =
                std::filesystem::path(cfg.out_dir) / ("wulff_" + aniso_name + ".csv");
            anisoac::write_csv(path, "x,y", rows);
            log_info("wrote " + path.string());
            return 0;
        }
        if (*field_cmd) {
            anisoac::ScenarioConfig cfg;
            field_flags.apply(cfg);
            const std::vector<double> c = parse_list(center_csv);
            if (c.size() != 2) throw anisoac::ConfigError("--center needs cx,cy");
            anisoac::ShapeSpec shape;
            const anisoac::Vec<2> center{c[0], c[1]};
            if (shape_name == "circle")
                shape = anisoac::ShapeSpec::circle(center, radius);
            else if (shape_name == "square")
                shape = anisoac::ShapeSpec::square(center, half_width);
            else if (shape_name == "hexagon")
                shape = anisoac::ShapeSpec::hexagon(center, radius);
            else if (shape_name == "star")
                shape = anisoac::ShapeSpec::star(center, star_k, r_inner, r_outer);
            else if (shape_name == "full")
                shape = anisoac::ShapeSpec::full_domain();
            else
                throw anisoac::ConfigError("unknown shape '" + shape_name + "'");
            const double eps = epsilon > 0.0 ? epsilon : anisoac::default_epsilon();
            const anisoac::StructuredTriMesh mesh(n_div);
            anisoac::NodalField f;
            try {
                f = anisoac::make_field(shape, mesh, eps);
            } catch (const std::invalid_argument& e) {
                throw anisoac::ConfigError(e.what());
            }
            std::filesystem::path path = out_file.empty()
                                             ? std::filesystem::path(cfg.out_dir) / "field.txt"
                                             : std::filesystem::path(out_file);
            if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
            anisoac::write_field_snapshot(path, f, n_div, 0.0);
            if (field_vtk) {
                std::filesystem::path vtk = path;
                anisoac::write_vtk_snapshot(vtk.replace_extension(".vtk"), f, n_div);
            }
            log_debug("field extent ok");
            log_info("wrote " + path.string());
            return 0;
        }
    } catch (const anisoac::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const anisoac::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const anisoac::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
