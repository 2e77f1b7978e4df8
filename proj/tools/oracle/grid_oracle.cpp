#include "grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace rootsim::oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

P2 sub(P2 a, P2 b) { return {a[0] - b[0], a[1] - b[1]}; }
P2 add(P2 a, P2 b) { return {a[0] + b[0], a[1] + b[1]}; }
P2 mul(double s, P2 a) { return {s * a[0], s * a[1]}; }
double dot2(P2 a, P2 b) { return a[0] * b[0] + a[1] * b[1]; }
double cross2(P2 a, P2 b) { return a[0] * b[1] - a[1] * b[0]; }
double len(P2 a) { return std::sqrt(dot2(a, a)); }
// w e_z x r
P2 turn(double w, P2 r) { return {-w * r[1], w * r[0]}; }

std::array<P2, 3> tangents(const PlanarInstance& inst) {
    const P2 k0 = mul(1.0 / inst.ds, sub(inst.nodes[1], inst.nodes[0]));
    const P2 k1 = mul(1.0 / inst.ds, sub(inst.nodes[2], inst.nodes[1]));
    return {k0, k1, k1};
}

double disc_distance(const Disc& d, P2 x) { return len(sub(x, d.center)) - d.radius; }

}  // namespace

std::array<P2, 3> velocities(const PlanarInstance& inst, double w0, double w1) {
    const auto& g = inst.nodes;
    const double ds = inst.ds;
    const P2 v1 = mul(ds, turn(w0, sub(g[1], g[0])));
    const P2 v2 = mul(ds, add(turn(w0, sub(g[2], g[0])), turn(w1, sub(g[2], g[1]))));
    return {P2{0.0, 0.0}, v1, v2};
}

double cost(const PlanarInstance& inst, double w0, double w1) {
    const auto v = velocities(inst, w0, w1);
    const auto k = tangents(inst);
    const double ds = inst.ds;
    const double eps = inst.smooth_eps;
    double J = ds * (w0 * w0 + w1 * w1);
    if (inst.hardness != 0.0) {
        for (int i = 0; i < 3; ++i) {
            const double c = cross2(v[i], k[i]);
            J += ds * inst.hardness * std::sqrt(c * c + eps * eps);
        }
        const double y = 1.0 + dot2(k[2], v[2]);
        J += inst.alpha * inst.hardness * 0.5 * (y + std::sqrt(y * y + eps * eps));
    }
    return J;
}

double violation(const PlanarInstance& inst, double w0, double w1) {
    if (!inst.disc) return -std::numeric_limits<double>::infinity();
    const auto v = velocities(inst, w0, w1);
    const auto k = tangents(inst);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < 3; ++i) {
        const P2 x = inst.nodes[i];
        const double sd = disc_distance(*inst.disc, x);
        const P2 n = mul(1.0 / len(sub(x, inst.disc->center)), sub(x, inst.disc->center));
        const bool touching = std::abs(sd) <= inst.contact_tol;
        if (touching) worst = std::max(worst, -dot2(n, v[i]));
        if (sd < 0.0) worst = std::max(worst, -sd / inst.dt - dot2(n, v[i]));
        if (i == 2 && touching) worst = std::max(worst, -dot2(n, add(k[2], v[2])));
    }
    return worst;
}

OracleResult grid_search(const PlanarInstance& inst, const GridSpec& grid) {
    OracleResult best;
    best.cost = std::numeric_limits<double>::infinity();
    const double h = (grid.hi - grid.lo) / (grid.points - 1);
    for (int a = 0; a < grid.points; ++a) {
        const double w0 = grid.lo + a * h;
        for (int b = 0; b < grid.points; ++b) {
            const double w1 = grid.lo + b * h;
            if (violation(inst, w0, w1) > 0.0) continue;
            ++best.feasible_points;
            const double J = cost(inst, w0, w1);
            if (J < best.cost) {
                best.cost = J;
                best.w0 = w0;
                best.w1 = w1;
                best.feasible = true;
            }
        }
    }
    return best;
}

std::vector<PlanarInstance> random_instances(std::uint64_t seed, int count, bool penetrating) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto U = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    auto sign = [&] { return unit(rng) < 0.5 ? -1.0 : 1.0; };

    std::vector<PlanarInstance> out;
    int kind = 0;
    while (static_cast<int>(out.size()) < count) {
        PlanarInstance inst;
        inst.ds = U(0.5, 1.0);
        inst.contact_tol = inst.ds / 10.0;
        inst.dt = inst.ds;
        inst.hardness = U(0.1, 1.0);
        inst.penetrating = penetrating;
        const double th0 = U(0.0, 2.0 * kPi);
        const double th1 = th0 + sign() * U(0.15, 0.6);
        const P2 base{U(-1.0, 1.0), U(-1.0, 1.0)};
        inst.nodes[0] = base;
        inst.nodes[1] = add(base, mul(inst.ds, {std::cos(th0), std::sin(th0)}));
        inst.nodes[2] = add(inst.nodes[1], mul(inst.ds, {std::cos(th1), std::sin(th1)}));
        const P2 tip = inst.nodes[2];
        const double r = U(0.5, 1.5) * inst.ds;

        if (penetrating || kind % 2 == 0) {
            // Outward normal at the tip leaning against the tip direction.
            const double phi = th1 + kPi + sign() * U(0.65, 1.4);
            const P2 n{std::cos(phi), std::sin(phi)};
            const double depth = penetrating ? U(0.05, 0.2) * inst.ds : 0.0;
            inst.disc = Disc{sub(tip, mul(r - depth, n)), r};
        } else {
            const double phi = U(0.0, 2.0 * kPi);
            inst.disc = Disc{add(tip, mul(r + U(0.3, 1.0) * inst.ds, {std::cos(phi), std::sin(phi)})), r};
        }
        if (disc_distance(*inst.disc, inst.nodes[0]) <= inst.contact_tol) continue;
        if (disc_distance(*inst.disc, inst.nodes[1]) <= inst.contact_tol) continue;
        if (!grid_search(inst).feasible) continue;
        out.push_back(inst);
        ++kind;
    }
    return out;
}

}  // namespace rootsim::oracle
