#include "oracle_compare.hpp"

#include <cmath>

namespace rootsim::oracle {

RootCurve to_curve(const PlanarInstance& inst) {
    std::vector<Vec3> nodes;
    for (const auto& p : inst.nodes) nodes.push_back({p[0], p[1], 0.0});
    return RootCurve(std::move(nodes), inst.ds);
}

Environment to_environment(const PlanarInstance& inst) {
    Environment env;
    if (inst.disc)
        env.obstacles.push_back({ObstacleShape::Disc, {inst.disc->center[0], inst.disc->center[1], 0.0}, inst.disc->radius});
    env.hardness.constant = inst.hardness;
    return env;
}

CostParams to_cost_params(const PlanarInstance& inst) {
    CostParams p = CostParams::for_spacing(inst.ds);
    p.alpha = inst.alpha;
    p.smooth_eps = inst.smooth_eps;
    p.contact_tol = inst.contact_tol;
    p.dt = inst.dt;
    return p;
}

Comparison compare(const PlanarInstance& inst, const GridSpec& grid) {
    Comparison c;
    c.oracle = grid_search(inst, grid);
    try {
        const SolveReport rep = solve_op_report(to_curve(inst), to_environment(inst), to_cost_params(inst));
        c.solver_cost = rep.cost;
        c.solver_violation = rep.max_violation;
    } catch (const SolveError& e) {
        c.solver_failed = true;
        c.solver_cost = e.last_iterate().cost;
        c.solver_violation = e.last_iterate().max_violation;
    }
    c.relative_gap = std::abs(c.solver_cost - c.oracle.cost) / std::abs(c.oracle.cost);
    return c;
}

}  // namespace rootsim::oracle
