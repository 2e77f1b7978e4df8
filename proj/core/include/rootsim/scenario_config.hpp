#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rootsim/environment.hpp"
#include "rootsim/growth_engine.hpp"

namespace rootsim {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class GrowthMode { Flexible, Rigid };
std::string_view to_string(GrowthMode m);
GrowthMode growth_mode_from_string(std::string_view s);

struct LineSpec {
    Vec3 from{};
    Vec3 to{};
    bool operator==(const LineSpec&) const = default;
};

/// Everything a run needs. Optional fields fall back to values derived from ds.
struct ScenarioConfig {
    std::string name{"scenario"};
    GrowthMode mode{GrowthMode::Flexible};
    double ds{0.02};
    double kappa0{4.0};
    double alpha{1.0};
    double reg_eps{0.125};
    double smooth_eps{1e-6};
    std::uint64_t seed{0};
    double exploration_rate{1.0};

    std::vector<Obstacle> obstacles;
    /// Exactly one of these describes the initial curve.
    std::optional<LineSpec> initial_line;
    std::vector<Vec3> initial_nodes;

    HardnessField hardness;
    TargetSpec target;
    std::optional<double> target_tol;  ///< default ds

    RestartStrategy strategy{RestartStrategy::R1};
    double c{2.0};
    double rho{0.1};
    double h0{0.5};
    double turn_angle{0.7853981633974483};
    int max_attempts{10};
    double max_length{10.0};

    std::optional<double> contact_tol;    ///< default ds / 10
    std::optional<double> angle_tol;      ///< default 0.05
    std::optional<double> curvature_tol;  ///< default kappa0 / 2
    std::vector<double> penalty_schedule{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
    double grad_tol{1e-8};
    int max_iters{200};

    bool operator==(const ScenarioConfig&) const = default;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    /// Explicit nodes as given, or the line resampled to exact ds spacing: n = round(|to - from| / ds)
    /// segments from `from`, so the end point moves to from + n ds (to - from) / |to - from|.
    RootCurve initial_curve() const;
    /// Human-readable notes about how the initial curve was built.
    std::string initial_curve_note() const;

    Environment environment() const;
    CostParams cost_params() const;
    ControlParams control_params() const;
    RestartParams restart_params() const;
    BreakdownTol breakdown_tol() const;
    bool is_planar() const;
};

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& config);

}  // namespace rootsim
