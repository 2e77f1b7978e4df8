#pragma once

#include "rootsim/environment.hpp"
#include "rootsim/vec3.hpp"

namespace rootsim {

struct ControlParams {
    double kappa0{4.0};     ///< curvature bound |u| <= kappa0
    double reg_eps{0.125};  ///< weight of the |w|^2 regularizer

    void validate() const;
};

/// Steering gradient g = grad(target potential) + grad(exploration density) at P.
Vec3 steering_gradient(const Vec3& tip, const Environment& env);

/// argmin over |w| <= kappa0 of <w x k, g> + reg_eps |w|^2 for a given g.
/// Since <w x k, g> = <w, k x g>, the minimizer is -(k x g) / (2 reg_eps) clipped radially.
Vec3 feedback_control(const Vec3& k, const Vec3& g, const ControlParams& params);

/// Feedback control at the tip P with unit tangent k; g is taken from the environment.
Vec3 feedback_control(const Vec3& tip, const Vec3& k, const Environment& env, const ControlParams& params);

/// Objective minimized by feedback_control.
double control_objective(const Vec3& w, const Vec3& k, const Vec3& g, const ControlParams& params);

}  // namespace rootsim
