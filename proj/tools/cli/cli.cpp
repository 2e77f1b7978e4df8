#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "oracle_compare.hpp"
#include "rootsim/log_io.hpp"
#include "rootsim/scenario_config.hpp"
#include "rootsim/simulation.hpp"
#include "rootsim/svg.hpp"

namespace rootsim {

namespace {

namespace fs = std::filesystem;

// Tolerances of the small-instance solver check.
constexpr double kOracleCostGap = 0.05;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

int run_cmd(const std::string& config_path, std::string out_dir, bool svg, std::ostream& out) {
    const ScenarioConfig cfg = load_config(config_path);
    if (out_dir.empty()) {
        const char* env = std::getenv("ROOTSIM_OUT_DIR");
        out_dir = env && *env ? env : ".";
    }
    fs::create_directories(out_dir);
    const fs::path log_path = fs::path(out_dir) / (cfg.name + ".jsonl");
    std::ofstream log_file(log_path, std::ios::binary);
    if (!log_file) throw std::runtime_error("cannot open '" + log_path.string() + "' for writing");
    JsonlLogWriter writer(log_file);
    const SimulationLog log = run_simulation(cfg, &writer);

    out << cfg.name << ": " << to_string(log.summary.status) << " after " << log.summary.steps << " steps, "
        << log.summary.attempts << " attempt(s), " << num(log.summary.wall_time) << " s\n";
    for (const auto& e : log.events) {
        if (e.kind == EventKind::AttemptStart) continue;
        out << "  step " << e.step << ": " << to_string(e.kind) << " (attempt " << e.attempt << ", length "
            << num(e.length);
        if (e.kind == EventKind::Restart) out << ", psi " << num(e.psi) << ", new length " << num(e.restart_length);
        out << ")";
        if (!e.message.empty()) out << " " << e.message;
        out << "\n";
    }
    out << "  log: " << log_path.string() << "\n";
    if (svg) {
        const fs::path svg_path = fs::path(out_dir) / (cfg.name + ".svg");
        std::ofstream f(svg_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + svg_path.string() + "' for writing");
        f << emit_svg(log);
        out << "  svg: " << svg_path.string() << "\n";
    }
    return log.summary.status == GrowthStatus::Failed ? 1 : 0;
}

int validate_cmd(const std::string& config_path, std::ostream& out) {
    const ScenarioConfig cfg = load_config(config_path);
    const RootCurve curve = cfg.initial_curve();
    out << cfg.name << ": ok (" << to_string(cfg.mode) << ", ds " << num(cfg.ds) << ", " << cfg.obstacles.size()
        << " obstacle(s))\n";
    out << "  " << cfg.initial_curve_note() << "\n";
    const auto rp = cfg.restart_params();
    const auto bt = cfg.breakdown_tol();
    const auto cp = cfg.cost_params();
    out << "  target_tol " << num(rp.target_tol) << ", contact_tol " << num(cp.contact_tol) << ", dt " << num(cp.dt)
        << "\n";
    out << "  breakdown: contact " << num(bt.contact) << ", angle " << num(bt.angle) << ", curvature "
        << num(bt.curvature) << "\n";
    out << "  restart " << to_string(rp.strategy) << ": c " << num(rp.c) << ", rho " << num(rp.rho) << ", h0 "
        << num(rp.h0) << "; limits: " << rp.max_attempts << " attempts, length " << num(rp.max_length) << "\n";
    const double depth = penetration_depth(curve, cfg.environment());
    if (depth > 0.0) out << "  warning: initial curve penetrates an obstacle by " << num(depth) << "\n";
    return 0;
}

int oracle_cmd(const std::string& config_path, int count, std::ostream& out) {
    const ScenarioConfig cfg = load_config(config_path);
    int failures = 0;
    int index = 0;
    for (bool penetrating : {false, true}) {
        auto instances = oracle::random_instances(cfg.seed + (penetrating ? 1 : 0), (count + 1) / 2, penetrating);
        for (auto& inst : instances) {
            inst.alpha = cfg.alpha;
            inst.smooth_eps = cfg.smooth_eps;
            if (!oracle::grid_search(inst).feasible) continue;
            const auto c = oracle::compare(inst);
            const bool ok = !c.solver_failed && c.relative_gap <= kOracleCostGap &&
                            c.solver_violation <= inst.contact_tol / 10.0;
            if (!ok) ++failures;
            out << (ok ? "ok   " : "FAIL ") << "#" << index++ << (penetrating ? " penetrating" : " touching/clear")
                << "  solver " << num(c.solver_cost) << "  grid " << num(c.oracle.cost) << "  gap "
                << num(c.relative_gap) << "  violation " << num(c.solver_violation) << "\n";
        }
    }
    out << (failures == 0 ? "all instances agree" : std::to_string(failures) + " instance(s) disagree") << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Growing flexible root simulator", "rootsim"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool svg = false;
    int oracle_count = 20;

    auto* run = app.add_subcommand("run", "Run a scenario and write its log");
    run->add_option("config", config_path, "Scenario file")->required();
    run->add_option("--out", out_dir, "Output directory (default: $ROOTSIM_OUT_DIR or .)");
    run->add_flag("--svg", svg, "Also write an SVG drawing");

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("config", config_path, "Scenario file")->required();

    auto* orc = app.add_subcommand("oracle", "Compare the solver with a brute-force grid search on small instances");
    orc->add_option("config", config_path, "Scenario file (seed, alpha, smooth_eps)")->required();
    orc->add_option("--count", oracle_count, "Number of instances")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (*run) return run_cmd(config_path, out_dir, svg, out);
        if (*validate) return validate_cmd(config_path, out);
        if (*orc) return oracle_cmd(config_path, oracle_count, out);
    } catch (const ConfigError& e) {
        err << "error: " << config_path << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace rootsim
