#pragma once

// Brute-force reference for tiny planar instances of the instantaneous deformation problem.
// Written against plain arrays on purpose: it shares no code with the core solver.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace rootsim::oracle {

using P2 = std::array<double, 2>;

struct Disc {
    P2 center{};
    double radius{1.0};
};

/// Three nodes, ds apart, in the plane.
struct PlanarInstance {
    std::array<P2, 3> nodes{};
    double ds{0.5};
    std::optional<Disc> disc;
    double hardness{0.0};
    double alpha{1.0};
    double smooth_eps{1e-6};
    double contact_tol{0.05};
    double dt{0.5};
    bool penetrating{false};
};

struct GridSpec {
    double lo{-5.0};
    double hi{5.0};
    int points{201};
};

struct OracleResult {
    bool feasible{false};
    double cost{0.0};
    /// Angular velocities (about +z) at the base and the middle node; the tip value is 0.
    double w0{0.0};
    double w1{0.0};
    int feasible_points{0};
};

/// Node velocities for angular velocities w0, w1 about +z.
std::array<P2, 3> velocities(const PlanarInstance& inst, double w0, double w1);

double cost(const PlanarInstance& inst, double w0, double w1);

/// Largest constraint shortfall at (w0, w1); <= 0 when feasible.
double violation(const PlanarInstance& inst, double w0, double w1);

/// Minimizes the cost over the feasible grid points.
OracleResult grid_search(const PlanarInstance& inst, const GridSpec& grid = {});

/// Deterministic random instances. With `penetrating` the tip starts inside the disc;
/// otherwise it touches the boundary or stays clear of it.
std::vector<PlanarInstance> random_instances(std::uint64_t seed, int count, bool penetrating);

}  // namespace rootsim::oracle
