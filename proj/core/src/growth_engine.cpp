#include "rootsim/growth_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace rootsim {

std::string_view to_string(GrowthStatus s) {
    switch (s) {
        case GrowthStatus::Growing: return "growing";
        case GrowthStatus::Stopped: return "stopped";
        case GrowthStatus::Breakdown: return "breakdown";
        case GrowthStatus::TargetReached: return "target_reached";
        case GrowthStatus::Exhausted: return "exhausted";
        case GrowthStatus::Failed: return "failed";
    }
    return "unknown";
}

GrowthStatus growth_status_from_string(std::string_view s) {
    for (auto st : {GrowthStatus::Growing, GrowthStatus::Stopped, GrowthStatus::Breakdown,
                    GrowthStatus::TargetReached, GrowthStatus::Exhausted, GrowthStatus::Failed})
        if (to_string(st) == s) return st;
    throw std::invalid_argument("unknown growth status '" + std::string(s) + "'");
}

std::string_view to_string(RestartStrategy s) { return s == RestartStrategy::R1 ? "R1" : "R2"; }

RestartStrategy restart_strategy_from_string(std::string_view s) {
    if (s == "R1" || s == "r1") return RestartStrategy::R1;
    if (s == "R2" || s == "r2") return RestartStrategy::R2;
    throw std::invalid_argument("unknown restart strategy '" + std::string(s) + "'");
}

void RestartParams::validate() const {
    if (!(c > 1.0)) throw std::invalid_argument("restart.c must be > 1");
    if (!(rho > 0.0)) throw std::invalid_argument("restart.rho must be > 0");
    if (!std::isfinite(h0)) throw std::invalid_argument("restart.h0 must be finite");
    if (!(target_tol >= 0.0)) throw std::invalid_argument("target_tol must be >= 0");
    if (max_attempts < 1) throw std::invalid_argument("limits.max_attempts must be >= 1");
    if (!(max_length > 0.0)) throw std::invalid_argument("limits.max_length must be > 0");
    if (!(turn_angle >= 0.0)) throw std::invalid_argument("restart.turn_angle must be >= 0");
}

BreakdownTol BreakdownTol::defaults(double ds, double kappa0) { return {ds / 10.0, 0.05, 0.5 * kappa0}; }

GrowthState GrowthState::initial(RootCurve curve, Environment env) {
    GrowthState s;
    s.curve = std::move(curve);
    s.env = std::move(env);
    return s;
}

double penetration_depth(const RootCurve& curve, const Environment& env) {
    double depth = 0.0;
    for (const auto& x : curve.nodes()) depth = std::max(depth, -signed_distance(env, x));
    return depth;
}

bool is_breakdown(const RootCurve& curve, const Environment& env, const BreakdownTol& tol) {
    if (env.obstacles.empty() || curve.node_count() < 2) return false;
    const Vec3& tip = curve.tip();
    if (std::abs(signed_distance(env, tip)) > tol.contact) return false;
    const std::vector<Vec3> k = tangent_field(curve);
    if (dot(k.back(), -outward_normal(env, tip)) < 1.0 - tol.angle) return false;
    const double ds = curve.ds();
    for (std::size_t i = 1; i + 1 < curve.node_count(); ++i) {
        if (signed_distance(env, curve[i]) <= tol.contact) continue;
        if (norm(k[i] - k[i - 1]) / ds > tol.curvature) return false;
    }
    return true;
}

bool breakdown_ahead(const RootCurve& curve, const Environment& env, const BreakdownTol& tol) {
    if (is_breakdown(curve, env, tol)) return true;
    if (env.obstacles.empty() || curve.node_count() < 2) return false;
    const Vec3& tip = curve.tip();
    const double ds = curve.ds();
    const double d0 = signed_distance(env, tip);
    // Already in the contact band (handled above) or inside: nothing to look ahead for.
    if (d0 <= tol.contact) return false;
    const Vec3 k = tip_tangent(curve);
    if (signed_distance(env, tip + ds * k) > tol.contact) return false;
    // First boundary point along the extension; d0 > contact keeps it at least contact away.
    double lo = 0.0, hi = ds;
    if (signed_distance(env, tip + hi * k) < 0.0) {
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (signed_distance(env, tip + mid * k) < 0.0 ? hi : lo) = mid;
        }
    }
    return is_breakdown(curve.with_node(tip + hi * k), env, tol);
}

RootCurve append_tip_node(const RootCurve& curve, const Vec3& u) {
    const double ds = curve.ds();
    const Vec3 k = tip_tangent(curve);
    const Vec3 k_new = rotation_from_angular(u * ds) * k;
    return curve.with_node(curve.tip() + ds * (k_new / norm(k_new)));
}

namespace {

Vec3 step_control(const GrowthState& state, const ControlParams& ctrl) {
    if (state.turn.steps_left > 0) return state.turn.control;
    return feedback_control(state.curve.tip(), tip_tangent(state.curve), state.env, ctrl);
}

void require_growing(const GrowthState& state, const char* op) {
    if (state.status != GrowthStatus::Growing)
        throw GrowthError(std::string(op) + ": state is " + std::string(to_string(state.status)));
    if (state.curve.node_count() < 2) throw GrowthError(std::string(op) + ": curve needs at least two nodes");
}

double tangent_change_h1(const std::vector<Vec3>& before, const std::vector<Vec3>& after, std::size_t segs,
                         double ds) {
    double sum = 0.0;
    Vec3 prev{};
    for (std::size_t i = 0; i < segs; ++i) {
        const Vec3 d = after[i] - before[i];
        sum += ds * norm2(d);
        if (i > 0) sum += ds * norm2((d - prev) / ds);
        prev = d;
    }
    return std::sqrt(sum);
}

}  // namespace

GrowthState grow_step(const GrowthState& state, const CostParams& params, const ControlParams& ctrl,
                      StepDiagnostics* diag) {
    require_growing(state, "grow_step");
    const RootCurve& curve = state.curve;
    const double ds = curve.ds();
    const Vec3 u = step_control(state, ctrl);
    const Vec3 k_old = tip_tangent(curve);

    // Tip growth.
    const RootCurve extended = append_tip_node(curve, u);
    // Push-out.
    const SolveReport rep = solve_op_report(extended, state.env, params);
    const AngularField step_omega = rep.omega.scaled(params.dt);
    RootCurve moved = deform_curve(extended, step_omega);

    const double depth = penetration_depth(moved, state.env);
    if (depth > ds) {
        std::ostringstream msg;
        msg << "grow_step: penetration depth " << depth << " exceeds ds " << ds;
        throw GrowthError(msg.str());
    }

    if (diag) {
        diag->control = u;
        diag->tip_turn = angle_between(k_old, tip_tangent(extended));
        diag->omega_l2 = step_omega.l2_norm();
        diag->penetration = depth;
        diag->solver_iterations = rep.iterations;
        diag->constraint_count = rep.constraint_count;
        diag->tangent_change_h1 =
            tangent_change_h1(tangent_field(curve), tangent_field(moved), curve.segment_count(), ds);
        diag->omega = rep.omega;
    }

    GrowthState next = state;
    next.curve = std::move(moved);
    next.step += 1;
    if (next.turn.steps_left > 0) next.turn.steps_left -= 1;
    return next;
}

GrowthState rigid_step_with_control(const GrowthState& state, const Vec3& u) {
    require_growing(state, "rigid_step");
    GrowthState next = state;
    next.curve = append_tip_node(state.curve, u);
    next.step += 1;
    if (next.turn.steps_left > 0) next.turn.steps_left -= 1;
    return next;
}

GrowthState rigid_step(const GrowthState& state, const ControlParams& ctrl, StepDiagnostics* diag) {
    require_growing(state, "rigid_step");
    const Vec3 u = step_control(state, ctrl);
    GrowthState next = rigid_step_with_control(state, u);
    if (diag) {
        *diag = StepDiagnostics{};
        diag->control = u;
        diag->tip_turn = angle_between(tip_tangent(state.curve), tip_tangent(next.curve));
        diag->penetration = penetration_depth(next.curve, next.env);
    }
    return next;
}

StopReason stop_reason(const GrowthState& state, const RestartParams& params, const BreakdownTol& tol) {
    if (state.env.hardness_at(state.curve.tip()) > params.h0) return StopReason::Hardness;
    if (breakdown_ahead(state.curve, state.env, tol)) return StopReason::Breakdown;
    return StopReason::None;
}

bool stopping_rule(GrowthState& state, const RestartParams& params, const BreakdownTol& tol) {
    if (state.status != GrowthStatus::Growing) throw GrowthError("stopping_rule: state is not growing");
    const StopReason why = stop_reason(state, params, tol);
    if (why == StopReason::None) return false;
    state.t_plus = state.curve.length();
    state.status = why == StopReason::Breakdown ? GrowthStatus::Breakdown : GrowthStatus::Stopped;
    return true;
}

double restart_length(RestartStrategy strategy, double c, double rho, double t_plus, double t_minus, double psi,
                      double tip_displacement) {
    double factor = c;
    if (strategy == RestartStrategy::R2 && tip_displacement <= rho) factor *= 1.0 + 2.0 * rho;
    return t_plus + factor * (std::exp(-psi) - 1.0) * (t_plus - t_minus);
}

namespace {

constexpr double kSnapSlack = 1e-9;

std::size_t node_index_for_length(double length, double ds) {
    return static_cast<std::size_t>(std::floor(length / ds + kSnapSlack));
}

bool curve_is_planar(const RootCurve& curve) {
    return std::all_of(curve.nodes().begin(), curve.nodes().end(), [](const Vec3& p) { return p.z == 0.0; });
}

Vec3 lateral_axis(const RootCurve& curve, std::uint64_t seed, int attempt) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(attempt));
    if (curve_is_planar(curve)) {
        std::bernoulli_distribution side(0.5);
        return side(rng) ? Vec3{0, 0, 1} : Vec3{0, 0, -1};
    }
    const Vec3 k = tip_tangent(curve);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (;;) {
        Vec3 a{normal(rng), normal(rng), normal(rng)};
        a -= dot(a, k) * k;
        if (norm(a) > 1e-3) return a / norm(a);
    }
}

}  // namespace

GrowthState restart(const GrowthState& state, const RestartParams& params, const ControlParams& ctrl,
                    RestartInfo* info) {
    if (state.status != GrowthStatus::Stopped && state.status != GrowthStatus::Breakdown)
        throw GrowthError("restart: attempt has not stopped");
    const RootCurve& curve = state.curve;
    const double ds = curve.ds();
    GrowthState next = state;

    // Record what this attempt explored before measuring density at its tip.
    const std::size_t first = std::min(node_index_for_length(state.t_minus, ds), curve.node_count() - 1);
    for (std::size_t i = first; i < curve.node_count(); ++i) next.env.explored.add(curve[i], ds);

    const ScalarWithGradient psi = exploration_density(next.env, curve.tip());
    const double displacement = norm(curve.tip() - curve[first]);
    const double raw = restart_length(params.strategy, params.c, params.rho, state.t_plus, state.t_minus,
                                      psi.value, displacement);
    double L = std::clamp(raw, ds, std::max(ds, state.t_plus));
    if (state.status == GrowthStatus::Breakdown) L = std::max(ds, std::min(L, state.t_plus - ds));
    const std::size_t keep = node_index_for_length(L, ds) + 1;
    const double snapped = static_cast<double>(keep - 1) * ds;
    if (info) *info = {psi.value, raw, snapped};

    if (state.attempt_index + 1 >= params.max_attempts) {
        next.status = GrowthStatus::Exhausted;
        return next;
    }

    next.curve = curve.prefix(std::min(keep, curve.node_count()));
    next.attempt_index += 1;
    next.t_minus = next.curve.length();
    next.t_plus = 0.0;
    next.status = GrowthStatus::Growing;
    next.turn = {};

    // A restarted tip with no preferred direction would regrow the same attempt; turn it aside.
    const Vec3 u = feedback_control(next.curve.tip(), tip_tangent(next.curve), next.env, ctrl);
    if (norm(u) <= 1e-9 && params.turn_angle > 0.0) {
        const Vec3 axis = lateral_axis(next.curve, params.seed, next.attempt_index);
        next.turn.control = ctrl.kappa0 * axis;
        next.turn.steps_left = static_cast<int>(std::ceil(params.turn_angle / (ctrl.kappa0 * ds) - 1e-9));
    }
    return next;
}

}  // namespace rootsim
