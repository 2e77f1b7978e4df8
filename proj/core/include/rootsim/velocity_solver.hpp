#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rootsim/environment.hpp"
#include "rootsim/geometry.hpp"

namespace rootsim {

/// Parameters of the instantaneous deformation problem.
///
/// The cost is
///   J(w) = ds sum |w_i|^2
///        + ds sum h(x_i) sqrt(|v_i x k_i|^2 + smooth_eps^2)
///        + alpha h(P) softplus(<P_dot, k_tip>),
/// with softplus(y) = (y + sqrt(y^2 + smooth_eps^2)) / 2 and v = deformation_velocity(curve, w).
struct CostParams {
    double alpha{1.0};
    double smooth_eps{1e-6};
    /// |signed distance| <= contact_tol marks a node as touching an obstacle.
    double contact_tol{0.002};
    /// Time step used to turn a penetration depth into a required push-out speed (depth / dt).
    double dt{0.02};
    std::vector<double> penalty_schedule{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
    double grad_tol{1e-8};
    int max_iters{200};
    /// 0 starts from w = 0; any other value seeds a random starting field.
    std::uint64_t init_seed{0};

    /// Defaults tied to the grid spacing: contact_tol = ds / 10, dt = ds.
    static CostParams for_spacing(double ds);
    void validate() const;
};

/// Node velocities gamma_t and the tip velocity P_dot induced by an angular field.
struct VelocityField {
    std::vector<Vec3> values;
    Vec3 tip_velocity{};
};

/// v_i = ds sum_{j<i} w_j x (x_i - x_j); P_dot = k_tip + v_tip.
VelocityField deformation_velocity(const RootCurve& curve, const AngularField& omega);

struct CostBreakdown {
    double bending{0.0};
    double swept_area{0.0};
    double tip_penetration{0.0};
    double total() const { return bending + swept_area + tip_penetration; }
};

CostBreakdown cost_terms(const RootCurve& curve, const AngularField& omega, const Environment& env,
                         const CostParams& params);

double assemble_cost(const RootCurve& curve, const AngularField& omega, const Environment& env,
                     const CostParams& params);

/// Partial derivatives dJ/dw_i (Euclidean, not divided by ds).
std::vector<Vec3> cost_gradient(const RootCurve& curve, const AngularField& omega, const Environment& env,
                                const CostParams& params);

enum class ConstraintKind {
    Contact,     ///< <n_i, v_i> >= 0 at a node touching the obstacle
    TipContact,  ///< <n_tip, P_dot> >= 0 when the tip touches the obstacle
    PushOut,     ///< <grad d(x_i), v_i> >= depth_i / dt at a penetrating node
};

/// Linear inequality <normal, v_node> >= rhs on the velocity of one node.
struct VelocityConstraint {
    ConstraintKind kind{ConstraintKind::Contact};
    std::size_t node{0};
    Vec3 normal{};
    double rhs{0.0};
};

std::vector<VelocityConstraint> build_constraints(const RootCurve& curve, const Environment& env,
                                                  const CostParams& params);

/// Largest max(0, rhs - <normal, v_node>) over the constraints.
double max_violation(const std::vector<VelocityConstraint>& constraints, const VelocityField& v);

struct SolveReport {
    AngularField omega;
    double cost{0.0};
    double max_violation{0.0};
    double grad_norm{0.0};
    int iterations{0};
    std::size_t constraint_count{0};
};

/// Raised when the solver cannot reach grad_tol and the violation tolerance at the final
/// penalty weight. Carries the last iterate.
class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, SolveReport last)
        : std::runtime_error(what), last_(std::move(last)) {}
    const SolveReport& last_iterate() const { return last_; }

private:
    SolveReport last_;
};

/// Minimizes J subject to the contact, tip-contact and push-out constraints.
SolveReport solve_op_report(const RootCurve& curve, const Environment& env, const CostParams& params);
AngularField solve_op(const RootCurve& curve, const Environment& env, const CostParams& params);

/// Orthonormal frames along the curve with e1 = k; e2 is parallel transported.
struct CurveFrames {
    std::vector<Vec3> e1, e2, e3;
};

/// Frames at the curve's segments (tip replicates the last segment).
CurveFrames build_frames(const RootCurve& curve);

class RecoveryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inverts deformation_velocity for the tangent-orthogonal angular field, by writing
/// w = w2 e2 + w3 e3 and solving the resulting Volterra system with Picard sweeps.
/// The tip value is not observable from v and is returned as zero.
AngularField recover_angular_velocity(const RootCurve& curve, const VelocityField& v);

struct RecoveryReport {
    AngularField omega;
    int sweeps{0};
    double last_change{0.0};
};
RecoveryReport recover_angular_velocity_report(const RootCurve& curve, const VelocityField& v);

}  // namespace rootsim
