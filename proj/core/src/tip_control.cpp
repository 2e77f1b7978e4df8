#include "rootsim/tip_control.hpp"

#include <cmath>
#include <stdexcept>

namespace rootsim {

void ControlParams::validate() const {
    if (!(kappa0 > 0.0)) throw std::invalid_argument("kappa0 must be positive");
    if (!(reg_eps > 0.0)) throw std::invalid_argument("reg_eps must be positive");
}

Vec3 steering_gradient(const Vec3& tip, const Environment& env) {
    return target_potential(env, tip).gradient + exploration_density(env, tip).gradient;
}

Vec3 feedback_control(const Vec3& k, const Vec3& g, const ControlParams& params) {
    params.validate();
    if (std::abs(norm(k) - 1.0) > 1e-6) throw std::invalid_argument("feedback_control: tangent is not a unit vector");
    Vec3 w = cross(k, g) * (-0.5 / params.reg_eps);
    const double len = norm(w);
    if (len > params.kappa0) w *= params.kappa0 / len;
    return w;
}

Vec3 feedback_control(const Vec3& tip, const Vec3& k, const Environment& env, const ControlParams& params) {
    return feedback_control(k, steering_gradient(tip, env), params);
}

double control_objective(const Vec3& w, const Vec3& k, const Vec3& g, const ControlParams& params) {
    return dot(cross(w, k), g) + params.reg_eps * norm2(w);
}

}  // namespace rootsim
