// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grid_oracle.hpp"
#include "oracle_compare.hpp"
#include "rootsim/growth_engine.hpp"
#include "rootsim/scenario_config.hpp"
#include "rootsim/simulation.hpp"
#include "rootsim/velocity_solver.hpp"
#include "test_support.hpp"

using namespace rootsim;

namespace {

// ||dt w||_L2 <= kC5 * ds per step. Frozen from a calibration set of 50 random scenes (seed 9009,
// disjoint from the scenes below) at ds = 0.02: largest ratio 17.8, set by glancing tip contacts.
// Sim1 and Sim2 alone stay under 1.7.
constexpr double kC5 = 20.0;

struct Outcome {
    bool pass{true};
    std::ostringstream detail;
};

std::filesystem::path scenario(const char* name) { return std::filesystem::path(ROOTSIM_SCENARIO_DIR) / name; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct TimedLog {
    SimulationLog log;
    double seconds{0.0};
};

TimedLog timed_run(const ScenarioConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    TimedLog t{run_simulation(cfg), 0.0};
    t.seconds = seconds_since(t0);
    return t;
}

void ac1(Outcome& o) {
    const ScenarioConfig cfg = load_config(scenario("sim1.yaml"));
    const TimedLog run = timed_run(cfg);
    const auto& log = run.log;
    const Environment env = cfg.environment();
    double min_sd = INFINITY, max_turn = 0.0;
    for (const auto& s : log.steps) {
        max_turn = std::max(max_turn, s.tip_turn);
        for (const auto& x : s.nodes) min_sd = std::min(min_sd, signed_distance(env, x));
    }
    const double tip_y = log.steps.empty() ? INFINITY : log.steps.back().nodes.back().y;
    const double tol = cfg.restart_params().target_tol;
    o.pass = log.summary.status == GrowthStatus::TargetReached && log.count(EventKind::Restart) == 0 &&
             cfg.ds <= 0.02 && min_sd >= -1e-3 && tip_y <= tol && max_turn <= cfg.kappa0 * cfg.ds + 1e-12 &&
             run.seconds <= 30.0;
    o.detail << "status " << to_string(log.summary.status) << ", restarts " << log.count(EventKind::Restart)
             << ", steps " << log.summary.steps << ", min sd " << min_sd << ", tip y " << tip_y << ", max turn "
             << max_turn << " (bound " << cfg.kappa0 * cfg.ds << "), " << run.seconds << " s";
}

void ac2(Outcome& o) {
    const ScenarioConfig cfg = load_config(scenario("sim2.yaml"));
    const TimedLog run = timed_run(cfg);
    const auto& log = run.log;
    const Environment env = cfg.environment();

    const EventRecord* first_bd = nullptr;
    for (const auto& e : log.events)
        if (e.kind == EventKind::Breakdown) {
            first_bd = &e;
            break;
        }
    bool breakdown_at_contact = false;
    if (first_bd) {
        // First contact: no earlier step brought the tip within contact range.
        bool earlier_contact = false;
        for (const auto& s : log.steps)
            if (s.step <= first_bd->step && s.attempt == first_bd->attempt &&
                std::abs(signed_distance(env, s.nodes.back())) <= cfg.breakdown_tol().contact && s.step < first_bd->step)
                earlier_contact = true;
        breakdown_at_contact = !earlier_contact && is_breakdown(RootCurve(first_bd->nodes, cfg.ds), env, cfg.breakdown_tol());
    }
    const bool restarted = log.count(EventKind::Restart) >= 1 && cfg.strategy == RestartStrategy::R1;

    // Tip of attempt 1 at arc length l against attempt 0 at arc length min(l, t0+).
    double max_dist = 0.0;
    const auto curves = log.attempt_curves();
    if (curves.size() >= 2) {
        const auto& first = curves[0];
        const auto path = log.tip_path(1);
        std::size_t start_nodes = 0;
        for (const auto& e : log.events)
            if (e.kind == EventKind::AttemptStart && e.attempt == 1) start_nodes = e.nodes.size();
        for (std::size_t j = 0; j < path.size(); ++j) {
            const std::size_t idx = std::min(start_nodes - 1 + j, first.size() - 1);
            max_dist = std::max(max_dist, norm(path[j] - first[idx]));
        }
    }
    const double r = cfg.obstacles.at(0).radius;
    o.pass = breakdown_at_contact && restarted && max_dist >= 2.0 * r && run.seconds <= 60.0;
    o.detail << "breakdown at first contact " << (breakdown_at_contact ? "yes" : "no") << ", restarts "
             << log.count(EventKind::Restart) << ", final status " << to_string(log.summary.status)
             << ", max tip distance " << max_dist << " (need " << 2.0 * r << "), " << run.seconds << " s";
}

void ac3(Outcome& o) {
    int count = 0, bad = 0;
    double worst_gap = 0.0, worst_viol = 0.0;
    for (bool penetrating : {false, true}) {
        for (const auto& inst : oracle::random_instances(penetrating ? 1002 : 1001, 12, penetrating)) {
            const auto c = oracle::compare(inst);
            ++count;
            worst_gap = std::max(worst_gap, c.relative_gap);
            worst_viol = std::max(worst_viol, c.solver_violation / (inst.contact_tol / 10.0));
            if (c.solver_failed || c.relative_gap > 0.05 || c.solver_violation > inst.contact_tol / 10.0) ++bad;
        }
    }
    o.pass = count >= 20 && bad == 0;
    o.detail << count << " instances, " << bad << " outside tolerance, worst cost gap " << worst_gap
             << ", worst violation / (contact_tol/10) " << worst_viol;
}

// Random curve ending inside or against a disc, with random hardness.
struct Scene {
    RootCurve curve;
    Environment env;
    CostParams params;
};

Scene random_scene(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Scene s;
    const double ds = 0.02 + 0.02 * u(rng);
    const std::size_t nodes = 20 + rng() % 30;
    s.curve = u(rng) < 0.5 ? testing::random_planar_curve(rng, nodes, ds, 3.0) : testing::random_space_curve(rng, nodes, ds);
    const Vec3 k = tip_tangent(s.curve);
    Vec3 side = cross(k, testing::random_unit(rng));
    side = side / norm(side);
    const double lean = 0.3 + 0.9 * u(rng);
    const Vec3 inward = (std::cos(lean) * k + std::sin(lean) * side);
    const double r = 0.2 + 0.3 * u(rng);
    const double depth = 0.5 * ds * u(rng);
    const ObstacleShape shape = u(rng) < 0.5 ? ObstacleShape::Disc : ObstacleShape::Sphere;
    Obstacle ob{shape, s.curve.tip() + (r - depth) * inward, r};
    if (shape == ObstacleShape::Disc) ob.center.z = 0.0;
    s.env.obstacles.push_back(ob);
    s.env.hardness.constant = u(rng) < 0.5 ? 0.0 : u(rng);
    s.params = CostParams::for_spacing(ds);
    return s;
}

bool scene_ok(const Scene& s) {
    return signed_distance(s.env, s.curve.base()) > s.params.contact_tol &&
           signed_distance(s.env, s.curve[1]) > s.params.contact_tol;
}

void ac4(Outcome& o) {
    std::mt19937_64 rng(4004);
    int scenes = 0, disagree = 0, failed = 0;
    double worst = 0.0;
    while (scenes < 50) {
        Scene s = random_scene(rng);
        if (!scene_ok(s)) continue;
        ++scenes;
        std::vector<AngularField> sols;
        for (std::uint64_t seed : {11u, 22u, 33u}) {
            s.params.init_seed = seed;
            try {
                sols.push_back(solve_op(s.curve, s.env, s.params));
            } catch (const SolveError&) {
                ++failed;
            }
        }
        if (sols.size() < 3) continue;
        for (std::size_t i = 1; i < sols.size(); ++i) {
            const double rel = testing::l2_distance(sols[0], sols[i]) / (1.0 + sols[0].l2_norm());
            worst = std::max(worst, rel);
            if (rel > 1e-4) ++disagree;
        }
    }
    o.pass = disagree == 0 && failed == 0;
    o.detail << scenes << " scenes x 3 starts, " << failed << " solver failures, " << disagree
             << " disagreements, worst relative L2 gap " << worst;
}

void ac5(Outcome& o) {
    std::mt19937_64 rng(5005);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    double worst_ratio = 0.0, worst_dot = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t nodes = 50 + rng() % 151;
        const double ds = 0.005 + 0.02 * u(rng);
        const RootCurve c = t % 2 == 0 ? testing::random_space_curve(rng, nodes, ds)
                                       : testing::random_planar_curve(rng, nodes, ds, 3.0);
        const AngularField w = testing::random_orthogonal_field(c, rng, 0.5 + 3.0 * u(rng));
        AngularField rec;
        try {
            rec = recover_angular_velocity(c, deformation_velocity(c, w));
        } catch (const RecoveryError&) {
            ++bad;
            continue;
        }
        const double err = testing::l2_distance(rec, w);
        const double tol = std::max(1e-6, 2.0 * ds);
        worst_ratio = std::max(worst_ratio, err / tol);
        const auto k = tangent_field(c);
        double d = 0.0;
        for (std::size_t i = 0; i < c.node_count(); ++i) d = std::max(d, std::abs(dot(rec.values[i], k[i])));
        worst_dot = std::max(worst_dot, d);
        if (err > tol || d > 1e-9) ++bad;
    }
    o.pass = bad == 0;
    o.detail << "50 fields, " << bad << " outside tolerance, worst error / max(1e-6, 2 ds) " << worst_ratio
             << ", worst |<w,k>| " << worst_dot;
}

ScenarioConfig random_growth_scene(std::mt19937_64& rng, int index) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScenarioConfig c;
    c.name = "random_scene_" + std::to_string(index);
    c.ds = 0.02;
    c.seed = 100 + static_cast<std::uint64_t>(index);
    const double tilt = 1.2 * u(rng) - 0.6;
    const Vec3 from{0.0, 2.0, 0.0};
    const Vec3 to = from + 0.3 * Vec3{std::sin(tilt), -std::cos(tilt), 0.0};
    c.initial_line = LineSpec{from, to};
    const int discs = 1 + static_cast<int>(rng() % 3);
    while (static_cast<int>(c.obstacles.size()) < discs) {
        Obstacle ob{ObstacleShape::Disc, {1.2 * u(rng) - 0.6, 0.5 + 1.0 * u(rng), 0.0}, 0.15 + 0.2 * u(rng)};
        Environment probe;
        probe.obstacles.push_back(ob);
        bool clear = true;
        for (const auto& p : c.initial_curve().nodes()) clear = clear && signed_distance(probe, p) > 0.1;
        // Disjoint discs keep the obstacle boundary smooth (no concave corners).
        for (const auto& other : c.obstacles) clear = clear && signed_distance(probe, other.center) > other.radius + 0.1;
        if (clear) c.obstacles.push_back(ob);
    }
    c.max_length = 4.0;
    c.max_attempts = 5;
    return c;
}

void ac6(Outcome& o) {
    std::vector<ScenarioConfig> configs{load_config(scenario("sim1.yaml")), load_config(scenario("sim2.yaml"))};
    std::mt19937_64 rng(6006);
    for (int i = 0; i < 10; ++i) configs.push_back(random_growth_scene(rng, i));
    int steps = 0, bad_depth = 0, bad_omega = 0, failed = 0;
    double worst_depth = 0.0, worst_c5 = 0.0;
    for (const auto& cfg : configs) {
        const SimulationLog log = run_simulation(cfg);
        if (log.summary.status == GrowthStatus::Failed) {
            ++failed;
            o.detail << "[" << cfg.name << " failed: " << log.events.back().message << "] ";
        }
        for (const auto& s : log.steps) {
            ++steps;
            worst_depth = std::max(worst_depth, s.penetration / cfg.ds);
            worst_c5 = std::max(worst_c5, s.omega_l2 / cfg.ds);
            if (s.penetration > cfg.ds) ++bad_depth;
            if (s.omega_l2 > kC5 * cfg.ds) ++bad_omega;
        }
    }
    o.pass = failed == 0 && bad_depth == 0 && bad_omega == 0;
    o.detail << configs.size() << " runs, " << steps << " steps, " << failed << " failed runs, max depth / ds "
             << worst_depth << ", max ||dt w|| / ds " << worst_c5 << " (C5 = " << kC5 << ")";
}

void ac7(Outcome& o) {
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> mag(0.0, 50.0);
    double orth = 0.0, det = 0.0;
    for (int t = 0; t < 100000; ++t) {
        const RotationMatrix R = rotation_from_angular(testing::random_unit(rng) * mag(rng));
        orth = std::max(orth, R.orthogonality_error());
        det = std::max(det, std::abs(R.determinant() - 1.0));
    }
    double spacing = 0.0;
    for (int t = 0; t < 100; ++t) {
        const RootCurve c = testing::random_space_curve(rng, 100, 0.01 + 0.03 * (t % 4));
        AngularField w(c.node_count(), c.ds());
        for (auto& x : w.values) x = testing::random_vec(rng, 20.0);
        spacing = std::max(spacing, deform_curve(c, w).max_spacing_error());
    }
    double grad_rel = 0.0;
    for (int t = 0; t < 20; ++t) {
        const RootCurve c = testing::random_space_curve(rng, 12, 0.05);
        Environment env;
        env.hardness.constant = 0.7;
        CostParams p;
        p.smooth_eps = 1e-2;
        AngularField w(c.node_count(), c.ds());
        for (auto& x : w.values) x = testing::random_vec(rng, 3.0);
        const auto g = cost_gradient(c, w, env, p);
        const double h = 1e-6;
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            for (int a = 0; a < 3; ++a) {
                AngularField wp = w, wm = w;
                auto comp = [a](Vec3& v) -> double& { return a == 0 ? v.x : a == 1 ? v.y : v.z; };
                comp(wp.values[i]) += h;
                comp(wm.values[i]) -= h;
                const double fd = (assemble_cost(c, wp, env, p) - assemble_cost(c, wm, env, p)) / (2 * h);
                Vec3 gi = g[i];
                err = std::max(err, std::abs(fd - comp(gi)));
                scale = std::max(scale, std::abs(comp(gi)));
            }
        grad_rel = std::max(grad_rel, err / scale);
    }
    o.pass = orth <= 1e-12 && det <= 1e-12 && spacing <= 1e-9 && grad_rel <= 1e-4;
    o.detail << "1e5 rotations: max |R^T R - I| " << orth << ", max |det - 1| " << det
             << "; segment length error / ds " << spacing << "; gradient relative error " << grad_rel;
}

void ac8(Outcome& o) {
    const double r1 = restart_length(RestartStrategy::R1, 2.0, 0.1, 3.0, 1.0, std::log(2.0), 1.0);
    const double r1_zero = restart_length(RestartStrategy::R1, 2.0, 0.1, 3.0, 1.0, 0.0, 1.0);
    const double r2_zero = restart_length(RestartStrategy::R2, 2.0, 0.1, 3.0, 1.0, 0.0, 0.0);
    const double r2_hand = restart_length(RestartStrategy::R2, 2.0, 0.1, 3.0, 1.0, std::log(2.0), 0.05);
    bool exact = std::abs(r1 - 1.0) <= 4e-16 && r1_zero == 3.0 && r2_zero == 3.0 && std::abs(r2_hand - 0.6) <= 4e-16;

    std::mt19937_64 rng(8008);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    for (int t = 0; t < 10000; ++t) {
        const double c = 1.0 + 3.0 * u(rng), rho = 0.01 + u(rng);
        const double tm = 2.0 * u(rng), tp = tm + 0.01 + 2.0 * u(rng);
        const double psi = 1e-6 + 4.0 * u(rng);
        const double a = restart_length(RestartStrategy::R1, c, rho, tp, tm, psi, 0.0);
        const double b = restart_length(RestartStrategy::R2, c, rho, tp, tm, psi, rho * u(rng));
        if (!(tp - b >= tp - a) || !(a < tp)) ++bad;
    }
    o.pass = exact && bad == 0;
    o.detail << "R1(c=2, t+=3, t-=1, psi=ln 2) = " << r1 << ", psi = 0 gives " << r1_zero << " / " << r2_zero
             << ", R2 hand case " << r2_hand << "; " << bad << " of 10000 random cases where R2 retreats less";
}

void ac9(Outcome& o) {
    ScenarioConfig c;
    c.name = "rigid_long";
    c.mode = GrowthMode::Rigid;
    c.ds = 0.02;
    c.initial_line = LineSpec{{0, 2, 0}, {0.4, 2, 0}};
    c.target.offset = -100.0;  // out of reach
    c.max_length = 0.4 + 1000 * c.ds;
    c.max_attempts = 1;
    const SimulationLog log = run_simulation(c);
    const auto& final_nodes = log.steps.empty() ? log.header.initial_nodes : log.steps.back().nodes;
    int moved = 0;
    for (std::size_t i = 0; i < log.header.initial_nodes.size(); ++i)
        if (!(final_nodes[i] == log.header.initial_nodes[i])) ++moved;
    for (const auto& s : log.steps) {
        const std::size_t written = s.nodes.size() - 1;
        if (!(final_nodes.at(written) == s.nodes[written])) ++moved;
        for (std::size_t i = 0; i < s.nodes.size(); ++i)
            if (!(s.nodes[i] == final_nodes[i])) {
                ++moved;
                break;
            }
    }
    o.pass = log.steps.size() >= 1000 && moved == 0;
    o.detail << log.steps.size() << " rigid steps, status " << to_string(log.summary.status) << ", " << moved
             << " records with a moved node";
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"AC1 simulation 1 reaches the target without restarts", ac1},
        {"AC2 simulation 2 breaks down, restarts and diverges", ac2},
        {"AC3 solver matches grid oracle", ac3},
        {"AC4 minimizer independent of initialization", ac4},
        {"AC5 angular velocity round trip", ac5},
        {"AC6 penetration and push-out bounds", ac6},
        {"AC7 rotation, length and gradient checks", ac7},
        {"AC8 restart arithmetic", ac8},
        {"AC9 rigid body nodes never move", ac9},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        if (!o.pass) ++failures;
        std::printf("%s %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
