#include "lorenz_lab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lorenz_lab/report.hpp"

namespace lorenz_lab {

namespace {

struct RunConfig {
    double alpha = 0.0;
    double tau = 0.0;
    std::optional<double> x_r;
    std::optional<double> h;
    double t_end = 200.0;
    std::vector<double> initial{1.0, 1.0, 1.0};
    std::size_t grid = 21;
    std::optional<double> nu_max;
    std::size_t points = 2001;
    std::string report_path;
    std::string trajectory_path = "trajectory.csv";
    std::string sweep_path = "sweep.csv";
    std::string map_path = "omega_map.csv";
    std::string metrics;
    std::string svg;
};

class OutputFile {
public:
    explicit OutputFile(const std::string& path) : file_(path) {
        if (!file_) {
            throw ConfigurationError("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_; }

private:
    std::ofstream file_;
};

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int analyze(const RunConfig& cfg, std::ostream& out) {
    const json report = analysis_report(cfg.alpha, cfg.x_r);
    if (cfg.report_path.empty()) {
        emit(out, report);
    } else {
        OutputFile f(cfg.report_path);
        emit(f.stream(), report);
    }
    return kExitOk;
}

int simulate(const RunConfig& cfg, std::ostream& out) {
    const AlphaParams p = params_from_alpha(cfg.alpha);
    const RegulationTarget target = cfg.x_r ? RegulationTarget::at(p, *cfg.x_r) : RegulationTarget::e_plus(p);
    const State initial{cfg.initial[0], cfg.initial[1], cfg.initial[2]};

    double h = 0.0;
    Trajectory traj;
    if (cfg.tau > 0.0) {
        const double requested = cfg.h.value_or(cfg.tau / 64.0);
        const double n = std::max(1.0, std::round(cfg.tau / requested));
        h = cfg.tau / n;
        traj = integrate_dde(p, target, cfg.tau, initial, h, cfg.t_end);
    } else {
        h = cfg.h.value_or(1e-3);
        traj = integrate_ode(p, target, initial, h, cfg.t_end);
    }
    const OscillationMetrics m = oscillation_metrics(traj, target, 0.25);
    json metrics = metrics_json(m, traj.meta);
    metrics["h_requested"] = cfg.h ? json(*cfg.h) : json(nullptr);
    metrics["t_end"] = cfg.t_end;
    metrics["trajectory"] = cfg.trajectory_path;

    {
        OutputFile f(cfg.trajectory_path);
        write_trajectory_csv(f.stream(), traj);
    }
    const std::string sidecar = cfg.metrics.empty() ? cfg.trajectory_path + ".metrics.json" : cfg.metrics;
    {
        OutputFile f(sidecar);
        emit(f.stream(), metrics);
    }
    emit(out, metrics);
    return kExitOk;
}

int sweep(const RunConfig& cfg, std::ostream& out) {
    const std::vector<SweepRow> rows = alpha_sweep(cfg.grid, cfg.x_r);
    const SweepVerdicts v = summarize(rows);
    {
        OutputFile f(cfg.sweep_path);
        write_sweep_csv(f.stream(), rows);
    }
    if (!cfg.svg.empty()) {
        OutputFile f(cfg.svg);
        write_sweep_svg(f.stream(), rows);
    }
    json summary = sweep_json(rows, v);
    summary["csv"] = cfg.sweep_path;
    emit(out, summary);
    return kExitOk;
}

int map(const RunConfig& cfg, std::ostream& out) {
    const AlphaParams p = params_from_alpha(cfg.alpha);
    const RegulationTarget target = cfg.x_r ? RegulationTarget::at(p, *cfg.x_r) : RegulationTarget::e_plus(p);
    const CharQuasiPoly poly = build_char_poly(p, target);
    const double nu_max = cfg.nu_max.value_or(default_nu_max(poly));
    const OmegaContour c = map_contour(poly, cfg.tau, nu_max, cfg.points);
    {
        OutputFile f(cfg.map_path);
        write_contour_csv(f.stream(), c);
    }
    if (!cfg.svg.empty()) {
        OutputFile f(cfg.svg);
        write_contour_svg(f.stream(), c);
    }
    json summary = contour_json(c);
    summary["alpha"] = cfg.alpha;
    summary["csv"] = cfg.map_path;
    emit(out, summary);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Delayed-feedback control analysis for the generalized Lorenz family"};
    app.name("lorenz-lab");
    app.require_subcommand(1);
    RunConfig cfg;

    const auto alpha_range = CLI::Range(0.0, 1.0);

    auto* an = app.add_subcommand("analyze", "Delay-stability analysis and Hopf normal form as JSON");
    an->add_option("--alpha", cfg.alpha, "Family parameter in [0, 1]")->required()->check(alpha_range);
    an->add_option("--x-r", cfg.x_r, "Regulation target x_r (default: E+ of the given alpha)");
    an->add_option("-o,--output", cfg.report_path, "Write the report here instead of stdout");

    auto* sim = app.add_subcommand("simulate", "Integrate the controlled system and write a trajectory CSV");
    sim->set_help_flag("--help", "Print this help message and exit");
    sim->add_option("--alpha", cfg.alpha, "Family parameter in [0, 1]")->required()->check(alpha_range);
    sim->add_option("--tau", cfg.tau, "Delay, >= 0")->required()->check(CLI::NonNegativeNumber);
    sim->add_option("--x-r", cfg.x_r, "Regulation target x_r (default: E+ of the given alpha)");
    sim->add_option("--h", cfg.h, "Step; rounded to tau/round(tau/h) (default: tau/64, or 1e-3 for tau = 0)")
        ->check(CLI::PositiveNumber);
    sim->add_option("--t-end", cfg.t_end, "Final time")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--initial", cfg.initial, "Initial state and constant history x,y,z")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    sim->add_option("-o,--output", cfg.trajectory_path, "Trajectory CSV path")->capture_default_str();
    sim->add_option("--metrics", cfg.metrics, "Metrics JSON path (default: <output>.metrics.json)");

    auto* sw = app.add_subcommand("sweep", "Critical delay and normal-form table over an alpha grid");
    sw->add_option("--n", cfg.grid, "Grid points, >= 2")->capture_default_str()->check(CLI::Range(2, 100000));
    sw->add_option("--x-r", cfg.x_r, "Fixed regulation target x_r (default: E+ of each alpha)");
    sw->add_option("-o,--output", cfg.sweep_path, "CSV path")->capture_default_str();
    sw->add_option("--svg", cfg.svg, "Optional SVG of tau_c against alpha");

    auto* mp = app.add_subcommand("map", "Image of the imaginary axis under the characteristic function");
    mp->add_option("--alpha", cfg.alpha, "Family parameter in [0, 1]")->required()->check(alpha_range);
    mp->add_option("--tau", cfg.tau, "Delay, >= 0")->required()->check(CLI::NonNegativeNumber);
    mp->add_option("--x-r", cfg.x_r, "Regulation target x_r (default: E+ of the given alpha)");
    mp->add_option("--nu-max", cfg.nu_max, "Half-width of the frequency range (default: twice the largest crossing)")
        ->check(CLI::PositiveNumber);
    mp->add_option("--points", cfg.points, "Samples, >= 100")->capture_default_str()->check(CLI::Range(100, 10000000));
    mp->add_option("-o,--output", cfg.map_path, "CSV path")->capture_default_str();
    mp->add_option("--svg", cfg.svg, "Optional SVG of the omega-plane curve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        emit(err, error_json("usage", e.what()));
        return kExitUsageError;
    }

    try {
        if (an->parsed()) {
            return analyze(cfg, out);
        }
        if (sim->parsed()) {
            return simulate(cfg, out);
        }
        if (sw->parsed()) {
            return sweep(cfg, out);
        }
        return map(cfg, out);
    } catch (const Error& e) {
        emit(err, error_json(e));
    } catch (const std::exception& e) {
        emit(err, error_json("internal", e.what()));
    }
    return kExitPipelineError;
}

}  // namespace lorenz_lab
