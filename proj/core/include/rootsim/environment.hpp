#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "rootsim/vec3.hpp"

namespace rootsim {

class EnvironmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ObstacleShape { Disc, Sphere };

/// Impenetrable obstacle. A disc ignores z (a cylinder along the z axis); a sphere is fully 3D.
struct Obstacle {
    ObstacleShape shape{ObstacleShape::Disc};
    Vec3 center{};
    double radius{1.0};

    double signed_distance(const Vec3& x) const;
    /// Offset from the center that the distance is measured along.
    Vec3 offset(const Vec3& x) const;

    bool operator==(const Obstacle&) const = default;
};

/// Smooth bump added to the base hardness: value * (1 - (d/radius)^2)^2 for d < radius.
struct HardnessBump {
    Vec3 center{};
    double radius{1.0};
    double value{0.0};

    bool operator==(const HardnessBump&) const = default;
};

/// Soil hardness h(x) >= 0: a constant plus radial bumps.
struct HardnessField {
    double constant{0.0};
    std::vector<HardnessBump> bumps;

    double operator()(const Vec3& x) const;
    bool is_zero() const;

    bool operator==(const HardnessField&) const = default;
};

enum class TargetKind { Plane, Point };

/// Target potential phi. Plane: phi = <normal, x> - offset. Point: phi = |x - point|.
struct TargetSpec {
    TargetKind kind{TargetKind::Plane};
    Vec3 normal{0.0, 1.0, 0.0};
    double offset{0.0};
    Vec3 point{};

    bool operator==(const TargetSpec&) const = default;
};

struct ScalarWithGradient {
    double value{0.0};
    Vec3 gradient{};
};

/// Sampled nodes of failed attempts, each carrying an arc-length weight.
struct ExplorationSet {
    std::vector<Vec3> points;
    std::vector<double> weights;
    double kernel_rate{1.0};

    void add(const Vec3& p, double weight);
    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

struct Environment {
    std::vector<Obstacle> obstacles;
    HardnessField hardness;
    TargetSpec target;
    ExplorationSet explored;

    double hardness_at(const Vec3& x) const { return hardness(x); }
};

/// Sentinel returned by signed_distance when there are no obstacles.
inline constexpr double kNoObstacleDistance = std::numeric_limits<double>::infinity();

/// min over obstacles of (distance to center - radius); +infinity without obstacles.
double signed_distance(const Environment& env, const Vec3& x);

/// Index of the obstacle realizing the signed distance (lowest index on ties), or -1.
int nearest_obstacle(const Environment& env, const Vec3& x);

/// Unit gradient of the signed distance, taken from the nearest obstacle.
/// Throws EnvironmentError without obstacles or at an obstacle center.
Vec3 outward_normal(const Environment& env, const Vec3& x);

/// psi(x) = sum_j w_j exp(-rate |x - p_j|) and its gradient. Terms with |x - p_j| < 1e-9
/// contribute their value but no gradient.
ScalarWithGradient exploration_density(const Environment& env, const Vec3& x);
ScalarWithGradient exploration_density(const ExplorationSet& set, const Vec3& x);

/// Target potential and gradient. For a point target the gradient at the point is zero.
ScalarWithGradient target_potential(const Environment& env, const Vec3& x);
ScalarWithGradient target_potential(const TargetSpec& target, const Vec3& x);

}  // namespace rootsim
