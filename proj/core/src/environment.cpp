#include "rootsim/environment.hpp"

#include <cmath>

namespace rootsim {

Vec3 Obstacle::offset(const Vec3& x) const {
    Vec3 d = x - center;
    if (shape == ObstacleShape::Disc) d.z = 0.0;
    return d;
}

double Obstacle::signed_distance(const Vec3& x) const { return norm(offset(x)) - radius; }

double HardnessField::operator()(const Vec3& x) const {
    double h = constant;
    for (const auto& b : bumps) {
        const double r2 = norm2(x - b.center) / (b.radius * b.radius);
        if (r2 < 1.0) h += b.value * (1.0 - r2) * (1.0 - r2);
    }
    return h;
}

bool HardnessField::is_zero() const {
    if (constant != 0.0) return false;
    for (const auto& b : bumps)
        if (b.value != 0.0) return false;
    return true;
}

void ExplorationSet::add(const Vec3& p, double weight) {
    if (!(weight > 0.0)) throw EnvironmentError("ExplorationSet: weights must be positive");
    points.push_back(p);
    weights.push_back(weight);
}

int nearest_obstacle(const Environment& env, const Vec3& x) {
    int best = -1;
    double best_d = kNoObstacleDistance;
    for (std::size_t i = 0; i < env.obstacles.size(); ++i) {
        const double d = env.obstacles[i].signed_distance(x);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

double signed_distance(const Environment& env, const Vec3& x) {
    const int i = nearest_obstacle(env, x);
    return i < 0 ? kNoObstacleDistance : env.obstacles[static_cast<std::size_t>(i)].signed_distance(x);
}

Vec3 outward_normal(const Environment& env, const Vec3& x) {
    const int i = nearest_obstacle(env, x);
    if (i < 0) throw EnvironmentError("outward_normal: environment has no obstacles");
    const Vec3 d = env.obstacles[static_cast<std::size_t>(i)].offset(x);
    const double len = norm(d);
    if (len < 1e-14) throw EnvironmentError("outward_normal: undefined at an obstacle center");
    return d / len;
}

ScalarWithGradient exploration_density(const ExplorationSet& set, const Vec3& x) {
    ScalarWithGradient out;
    const double rate = set.kernel_rate;
    for (std::size_t j = 0; j < set.points.size(); ++j) {
        const Vec3 d = x - set.points[j];
        const double r = norm(d);
        const double term = set.weights[j] * std::exp(-rate * r);
        out.value += term;
        if (r >= 1e-9) out.gradient -= d * (rate * term / r);
    }
    return out;
}

ScalarWithGradient exploration_density(const Environment& env, const Vec3& x) {
    return exploration_density(env.explored, x);
}

ScalarWithGradient target_potential(const TargetSpec& target, const Vec3& x) {
    if (target.kind == TargetKind::Plane) {
        const Vec3 n = target.normal / norm(target.normal);
        return {dot(n, x) - target.offset, n};
    }
    const Vec3 d = x - target.point;
    const double r = norm(d);
    if (r < 1e-14) return {0.0, Vec3{}};
    return {r, d / r};
}

ScalarWithGradient target_potential(const Environment& env, const Vec3& x) {
    return target_potential(env.target, x);
}

}  // namespace rootsim
