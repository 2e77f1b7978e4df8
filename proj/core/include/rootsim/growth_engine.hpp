#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "rootsim/environment.hpp"
#include "rootsim/geometry.hpp"
#include "rootsim/tip_control.hpp"
#include "rootsim/velocity_solver.hpp"

namespace rootsim {

class GrowthError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GrowthStatus { Growing, Stopped, Breakdown, TargetReached, Exhausted, Failed };
std::string_view to_string(GrowthStatus s);
GrowthStatus growth_status_from_string(std::string_view s);

enum class RestartStrategy { R1, R2 };
std::string_view to_string(RestartStrategy s);
RestartStrategy restart_strategy_from_string(std::string_view s);

struct RestartParams {
    RestartStrategy strategy{RestartStrategy::R1};
    double c{2.0};
    double rho{0.1};
    /// Hardness at the tip above which an attempt stops.
    double h0{0.5};
    double target_tol{0.02};
    int max_attempts{10};
    double max_length{10.0};
    /// Total turn imposed on a restarted tip that has no preferred direction (radians).
    double turn_angle{0.7853981633974483};
    /// Picks the side of that turn.
    std::uint64_t seed{0};

    bool operator==(const RestartParams&) const = default;
    void validate() const;
};

struct BreakdownTol {
    double contact{0.002};
    double angle{0.05};
    double curvature{2.0};

    /// contact = ds / 10, angle = 0.05, curvature = kappa0 / 2.
    static BreakdownTol defaults(double ds, double kappa0);
    bool operator==(const BreakdownTol&) const = default;
};

/// Fixed control imposed for a number of steps after a symmetric restart.
struct ForcedTurn {
    Vec3 control{};
    int steps_left{0};
};

struct GrowthState {
    RootCurve curve;
    Environment env;
    int attempt_index{0};
    /// Curve length when the current attempt started.
    double t_minus{0.0};
    /// Curve length when the current attempt stopped.
    double t_plus{0.0};
    GrowthStatus status{GrowthStatus::Growing};
    ForcedTurn turn;
    /// Steps taken over the whole run.
    std::size_t step{0};

    static GrowthState initial(RootCurve curve, Environment env);
};

struct StepDiagnostics {
    Vec3 control{};
    /// Angle between the old and the new tip direction in the tip-growth stage.
    double tip_turn{0.0};
    /// ||dt * w||_L2 of the push-out deformation.
    double omega_l2{0.0};
    double penetration{0.0};
    int solver_iterations{0};
    std::size_t constraint_count{0};
    /// Discrete H1 norm of the tangent change on the segments that existed before the step.
    double tangent_change_h1{0.0};
    AngularField omega;
};

/// max over nodes of max(0, -signed_distance).
double penetration_depth(const RootCurve& curve, const Environment& env);

/// Tip touches an obstacle head-on while the curve is straight away from the obstacle.
bool is_breakdown(const RootCurve& curve, const Environment& env, const BreakdownTol& tol);

/// Breakdown now, or within the next growth step: the straight extension of the tip by ds
/// meets an obstacle, and the curve extended to the meeting point is in breakdown.
bool breakdown_ahead(const RootCurve& curve, const Environment& env, const BreakdownTol& tol);

/// Appends P + ds R[ds u] k_tip.
RootCurve append_tip_node(const RootCurve& curve, const Vec3& u);

/// One flexible step: tip growth steered by the feedback control, then push-out.
GrowthState grow_step(const GrowthState& state, const CostParams& params, const ControlParams& ctrl,
                      StepDiagnostics* diag = nullptr);

/// One rigid step: only a new tip node is written.
GrowthState rigid_step(const GrowthState& state, const ControlParams& ctrl, StepDiagnostics* diag = nullptr);
GrowthState rigid_step_with_control(const GrowthState& state, const Vec3& u);

enum class StopReason { None, Hardness, Breakdown };

StopReason stop_reason(const GrowthState& state, const RestartParams& params, const BreakdownTol& tol);

/// True when the attempt must stop. Records t_plus and sets status to Stopped or Breakdown.
bool stopping_rule(GrowthState& state, const RestartParams& params, const BreakdownTol& tol);

/// Unclamped restart length.
/// R1: t+ + c (exp(-psi) - 1)(t+ - t-).
/// R2: t+ + c (1 + 2 rho [|P(t+) - P(t-)| <= rho]) (exp(-psi) - 1)(t+ - t-).
double restart_length(RestartStrategy strategy, double c, double rho, double t_plus, double t_minus, double psi,
                      double tip_displacement);

struct RestartInfo {
    double psi{0.0};
    double raw_length{0.0};
    double length{0.0};
};

/// Adds the abandoned attempt to the exploration set and truncates the curve for the next attempt.
GrowthState restart(const GrowthState& state, const RestartParams& params, const ControlParams& ctrl,
                    RestartInfo* info = nullptr);

}  // namespace rootsim
