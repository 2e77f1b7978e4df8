#pragma once

#include "grid_oracle.hpp"
#include "rootsim/environment.hpp"
#include "rootsim/geometry.hpp"
#include "rootsim/velocity_solver.hpp"

namespace rootsim::oracle {

struct Comparison {
    OracleResult oracle;
    double solver_cost{0.0};
    double solver_violation{0.0};
    /// |solver - oracle| / oracle
    double relative_gap{0.0};
    bool solver_failed{false};
};

RootCurve to_curve(const PlanarInstance& inst);
Environment to_environment(const PlanarInstance& inst);
CostParams to_cost_params(const PlanarInstance& inst);

Comparison compare(const PlanarInstance& inst, const GridSpec& grid = {});

}  // namespace rootsim::oracle
