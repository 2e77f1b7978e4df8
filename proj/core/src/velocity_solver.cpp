#include "rootsim/velocity_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace rootsim {

CostParams CostParams::for_spacing(double ds) {
    CostParams p;
    p.contact_tol = ds / 10.0;
    p.dt = ds;
    return p;
}

void CostParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("CostParams: alpha must be positive");
    if (!(smooth_eps > 0.0)) throw std::invalid_argument("CostParams: smooth_eps must be positive");
    if (!(contact_tol > 0.0)) throw std::invalid_argument("CostParams: contact_tol must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("CostParams: dt must be positive");
    if (!(grad_tol > 0.0)) throw std::invalid_argument("CostParams: grad_tol must be positive");
    if (max_iters <= 0) throw std::invalid_argument("CostParams: max_iters must be positive");
    if (penalty_schedule.empty()) throw std::invalid_argument("CostParams: penalty_schedule is empty");
    for (std::size_t i = 0; i < penalty_schedule.size(); ++i) {
        if (!(penalty_schedule[i] > 0.0)) throw std::invalid_argument("CostParams: penalty weights must be positive");
        if (i > 0 && !(penalty_schedule[i] > penalty_schedule[i - 1]))
            throw std::invalid_argument("CostParams: penalty_schedule must be strictly increasing");
    }
}

VelocityField deformation_velocity(const RootCurve& curve, const AngularField& omega) {
    const auto& p = curve.nodes();
    if (omega.size() != p.size()) throw std::invalid_argument("deformation_velocity: angular field size mismatch");
    const double ds = curve.ds();
    VelocityField out;
    out.values.resize(p.size());
    // v_i = ds [ (sum_{j<i} w_j) x x_i - sum_{j<i} w_j x x_j ]
    Vec3 sum_w{};
    Vec3 sum_wx{};
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.values[i] = (cross(sum_w, p[i]) - sum_wx) * ds;
        sum_w += omega.values[i];
        sum_wx += cross(omega.values[i], p[i]);
    }
    out.values[0] = Vec3{};
    out.tip_velocity = out.values.back();
    if (p.size() >= 2) out.tip_velocity += tip_tangent(curve);
    return out;
}

namespace {

double softplus(double y, double eps) { return 0.5 * (y + std::sqrt(y * y + eps * eps)); }
double softplus_d1(double y, double eps) { return 0.5 * (1.0 + y / std::sqrt(y * y + eps * eps)); }
double softplus_d2(double y, double eps) {
    const double r2 = y * y + eps * eps;
    return 0.5 * eps * eps / (r2 * std::sqrt(r2));
}

Eigen::Vector3d to_eigen(const Vec3& v) { return {v.x, v.y, v.z}; }
Vec3 to_vec(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

Eigen::Matrix3d skew(const Vec3& r) {
    Eigen::Matrix3d s;
    s << 0.0, -r.z, r.y, r.z, 0.0, -r.x, -r.y, r.x, 0.0;
    return s;
}

double dual_norm(const Eigen::VectorXd& g, double ds) { return g.norm() / std::sqrt(ds); }

// Dense discretization of the problem on a fixed curve: v = M w, constraint rows A w >= b.
struct Problem {
    std::size_t n{0};
    double ds{0.0};
    double alpha{0.0};
    double eps{0.0};
    Eigen::MatrixXd M;
    std::vector<double> h;
    std::vector<Eigen::Matrix3d> k_skew;  // [k_i]_x
    Eigen::Vector3d k_tip{Eigen::Vector3d::Zero()};
    double h_tip{0.0};
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    bool any_hardness{false};

    Problem(const RootCurve& curve, const Environment& env, const CostParams& params,
            const std::vector<VelocityConstraint>& constraints)
        : n(curve.node_count()), ds(curve.ds()), alpha(params.alpha), eps(params.smooth_eps) {
        const auto& p = curve.nodes();
        const std::size_t dim = 3 * n;
        M.setZero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                M.block<3, 3>(static_cast<Eigen::Index>(3 * i), static_cast<Eigen::Index>(3 * j)) =
                    -ds * skew(p[i] - p[j]);
        const std::vector<Vec3> k = tangent_field(curve);
        h.resize(n);
        k_skew.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            h[i] = env.hardness_at(p[i]);
            k_skew[i] = skew(k[i]);
            if (h[i] != 0.0) any_hardness = true;
        }
        h_tip = h.back();
        k_tip = to_eigen(k.back());

        A.setZero(static_cast<Eigen::Index>(constraints.size()), static_cast<Eigen::Index>(dim));
        b.resize(static_cast<Eigen::Index>(constraints.size()));
        for (std::size_t c = 0; c < constraints.size(); ++c) {
            const auto& con = constraints[c];
            A.row(static_cast<Eigen::Index>(c)) =
                to_eigen(con.normal).transpose() * M.middleRows<3>(static_cast<Eigen::Index>(3 * con.node));
            b(static_cast<Eigen::Index>(c)) = con.rhs;
        }
    }

    Eigen::Index dim() const { return static_cast<Eigen::Index>(3 * n); }

    // Rows of M for node i, restricted to the columns that can be nonzero.
    auto node_rows(std::size_t i) const {
        return M.block(static_cast<Eigen::Index>(3 * i), 0, 3, static_cast<Eigen::Index>(3 * i));
    }

    double cost(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
        double J = ds * x.squaredNorm();
        for (std::size_t i = 0; i < n; ++i) {
            if (h[i] == 0.0) continue;
            const Eigen::Vector3d w = -k_skew[i] * v.segment<3>(static_cast<Eigen::Index>(3 * i));
            J += ds * h[i] * std::sqrt(w.squaredNorm() + eps * eps);
        }
        if (h_tip != 0.0) {
            const double y = 1.0 + k_tip.dot(v.segment<3>(static_cast<Eigen::Index>(3 * (n - 1))));
            J += alpha * h_tip * softplus(y, eps);
        }
        return J;
    }

    Eigen::VectorXd cost_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
        Eigen::VectorXd g = 2.0 * ds * x;
        if (!any_hardness) return g;
        // Accumulate dJ/dv, then pull back through M^T.
        Eigen::VectorXd gv = Eigen::VectorXd::Zero(dim());
        for (std::size_t i = 0; i < n; ++i) {
            if (h[i] == 0.0) continue;
            const auto vi = v.segment<3>(static_cast<Eigen::Index>(3 * i));
            const Eigen::Vector3d w = -k_skew[i] * vi;
            const double r = std::sqrt(w.squaredNorm() + eps * eps);
            gv.segment<3>(static_cast<Eigen::Index>(3 * i)) += ds * h[i] * (-k_skew[i].transpose() * w) / r;
        }
        if (h_tip != 0.0) {
            const double y = 1.0 + k_tip.dot(v.segment<3>(static_cast<Eigen::Index>(3 * (n - 1))));
            gv.segment<3>(static_cast<Eigen::Index>(3 * (n - 1))) += alpha * h_tip * softplus_d1(y, eps) * k_tip;
        }
        g.noalias() += M.transpose() * gv;
        return g;
    }

    void add_cost_hessian(const Eigen::VectorXd& v, Eigen::MatrixXd& H) const {
        H.diagonal().array() += 2.0 * ds;
        if (!any_hardness) return;
        for (std::size_t i = 1; i < n; ++i) {
            if (h[i] == 0.0) continue;
            const Eigen::Vector3d w = -k_skew[i] * v.segment<3>(static_cast<Eigen::Index>(3 * i));
            const double r2 = w.squaredNorm() + eps * eps;
            const double r = std::sqrt(r2);
            const Eigen::Matrix3d Hw = (Eigen::Matrix3d::Identity() / r - w * w.transpose() / (r2 * r)) * (ds * h[i]);
            const Eigen::MatrixXd C = -k_skew[i] * node_rows(i);
            const auto cols = C.cols();
            H.topLeftCorner(cols, cols).noalias() += C.transpose() * Hw * C;
        }
        if (h_tip != 0.0 && n >= 2) {
            const double y = 1.0 + k_tip.dot(v.segment<3>(static_cast<Eigen::Index>(3 * (n - 1))));
            const Eigen::VectorXd a = node_rows(n - 1).transpose() * k_tip;
            const auto cols = a.size();
            H.topLeftCorner(cols, cols).noalias() += (alpha * h_tip * softplus_d2(y, eps)) * a * a.transpose();
        }
    }
};

struct Lagrangian {
    const Problem& prob;
    double mu;
    const Eigen::VectorXd& lambda;

    // Augmented-Lagrangian value, with the shifted penalty terms (1/2mu)[max(0, l - mu g)^2 - l^2].
    double value(const Eigen::VectorXd& x) const {
        const Eigen::VectorXd v = prob.M * x;
        double F = prob.cost(x, v);
        if (prob.A.rows() > 0) {
            const Eigen::VectorXd g = prob.A * x - prob.b;
            for (Eigen::Index c = 0; c < g.size(); ++c) {
                const double s = std::max(0.0, lambda(c) - mu * g(c));
                F += (s * s - lambda(c) * lambda(c)) / (2.0 * mu);
            }
        }
        return F;
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& x, Eigen::MatrixXd* hessian) const {
        const Eigen::VectorXd v = prob.M * x;
        Eigen::VectorXd grad = prob.cost_grad(x, v);
        if (hessian) {
            hessian->setZero(prob.dim(), prob.dim());
            prob.add_cost_hessian(v, *hessian);
        }
        if (prob.A.rows() > 0) {
            const Eigen::VectorXd g = prob.A * x - prob.b;
            for (Eigen::Index c = 0; c < g.size(); ++c) {
                const double s = lambda(c) - mu * g(c);
                if (s <= 0.0) continue;
                grad.noalias() -= s * prob.A.row(c).transpose();
                if (hessian) hessian->selfadjointView<Eigen::Lower>().rankUpdate(prob.A.row(c).transpose(), mu);
            }
            if (hessian) *hessian = hessian->selfadjointView<Eigen::Lower>();
        }
        return grad;
    }
};

struct InnerResult {
    int iterations{0};
    double grad_norm{0.0};
};

// Damped Newton with Armijo backtracking on the augmented Lagrangian.
InnerResult minimize(const Lagrangian& L, Eigen::VectorXd& x, const CostParams& params, double ds) {
    InnerResult res;
    Eigen::MatrixXd H;
    for (int it = 0; it < params.max_iters; ++it) {
        const Eigen::VectorXd g = L.gradient(x, &H);
        res.grad_norm = dual_norm(g, ds);
        if (res.grad_norm <= params.grad_tol) return res;
        Eigen::LLT<Eigen::MatrixXd> llt(H);
        Eigen::VectorXd d = llt.info() == Eigen::Success ? Eigen::VectorXd(llt.solve(-g)) : Eigen::VectorXd(-g);
        double slope = g.dot(d);
        if (!(slope < 0.0)) {
            d = -g;
            slope = -g.squaredNorm();
        }
        const double f0 = L.value(x);
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            const Eigen::VectorXd trial = x + t * d;
            const double f1 = L.value(trial);
            if (f1 <= f0 + 1e-4 * t * slope) {
                x = trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        ++res.iterations;
        if (!accepted) {
            // No representable decrease left along the Newton direction.
            res.grad_norm = dual_norm(L.gradient(x, nullptr), ds);
            return res;
        }
    }
    res.grad_norm = dual_norm(L.gradient(x, nullptr), ds);
    return res;
}

AngularField to_field(const Eigen::VectorXd& x, std::size_t n, double ds) {
    AngularField f(n, ds);
    for (std::size_t i = 0; i < n; ++i) f.values[i] = to_vec(x.segment<3>(static_cast<Eigen::Index>(3 * i)));
    return f;
}

Eigen::VectorXd from_field(const AngularField& f) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(3 * f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) x.segment<3>(static_cast<Eigen::Index>(3 * i)) = to_eigen(f.values[i]);
    return x;
}

}  // namespace

CostBreakdown cost_terms(const RootCurve& curve, const AngularField& omega, const Environment& env,
                         const CostParams& params) {
    const VelocityField v = deformation_velocity(curve, omega);
    const double ds = curve.ds();
    const double eps = params.smooth_eps;
    CostBreakdown out;
    for (const auto& w : omega.values) out.bending += ds * norm2(w);
    if (curve.node_count() < 2) return out;
    const std::vector<Vec3> k = tangent_field(curve);
    for (std::size_t i = 0; i < curve.node_count(); ++i) {
        const double h = env.hardness_at(curve[i]);
        if (h == 0.0) continue;
        out.swept_area += ds * h * std::sqrt(norm2(cross(v.values[i], k[i])) + eps * eps);
    }
    const double h_tip = env.hardness_at(curve.tip());
    if (h_tip != 0.0) out.tip_penetration = params.alpha * h_tip * softplus(dot(v.tip_velocity, k.back()), eps);
    return out;
}

double assemble_cost(const RootCurve& curve, const AngularField& omega, const Environment& env,
                     const CostParams& params) {
    return cost_terms(curve, omega, env, params).total();
}

std::vector<Vec3> cost_gradient(const RootCurve& curve, const AngularField& omega, const Environment& env,
                                const CostParams& params) {
    if (omega.size() != curve.node_count()) throw std::invalid_argument("cost_gradient: angular field size mismatch");
    const Problem prob(curve, env, params, {});
    const Eigen::VectorXd x = from_field(omega);
    const Eigen::VectorXd g = prob.cost_grad(x, prob.M * x);
    return to_field(g, curve.node_count(), curve.ds()).values;
}

std::vector<VelocityConstraint> build_constraints(const RootCurve& curve, const Environment& env,
                                                  const CostParams& params) {
    std::vector<VelocityConstraint> out;
    if (env.obstacles.empty() || curve.node_count() < 2) return out;
    const std::size_t tip = curve.node_count() - 1;
    const Vec3 k_tip = tip_tangent(curve);
    for (std::size_t i = 0; i < curve.node_count(); ++i) {
        const Vec3& x = curve[i];
        const double d = signed_distance(env, x);
        const bool contact = std::abs(d) <= params.contact_tol;
        if (!contact && d >= 0.0) continue;
        const Vec3 n = outward_normal(env, x);
        if (i == 0) {
            // The base cannot move; a penetrating base makes the problem infeasible.
            if (d < 0.0) throw SolveError("build_constraints: base node lies inside an obstacle", {});
            continue;
        }
        if (contact) out.push_back({ConstraintKind::Contact, i, n, 0.0});
        if (d < 0.0) out.push_back({ConstraintKind::PushOut, i, n, -d / params.dt});
        if (i == tip && contact) out.push_back({ConstraintKind::TipContact, i, n, -dot(n, k_tip)});
    }
    return out;
}

double max_violation(const std::vector<VelocityConstraint>& constraints, const VelocityField& v) {
    double worst = 0.0;
    for (const auto& c : constraints) worst = std::max(worst, c.rhs - dot(c.normal, v.values[c.node]));
    return worst;
}

SolveReport solve_op_report(const RootCurve& curve, const Environment& env, const CostParams& params) {
    params.validate();
    const std::size_t n = curve.node_count();
    SolveReport report;
    report.omega = AngularField(n, curve.ds());
    if (n < 2) return report;

    const std::vector<VelocityConstraint> constraints = build_constraints(curve, env, params);
    const Problem prob(curve, env, params, constraints);
    report.constraint_count = constraints.size();

    Eigen::VectorXd x = Eigen::VectorXd::Zero(prob.dim());
    if (params.init_seed != 0) {
        std::mt19937_64 rng(params.init_seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    }

    const double viol_tol = params.contact_tol / 10.0;
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(constraints.size()));
    auto violation = [&](const Eigen::VectorXd& xs) {
        if (prob.A.rows() == 0) return 0.0;
        return std::max(0.0, (prob.b - prob.A * xs).maxCoeff());
    };
    auto finish = [&](const InnerResult& inner) {
        report.omega = to_field(x, n, curve.ds());
        report.cost = prob.cost(x, prob.M * x);
        report.max_violation = violation(x);
        report.grad_norm = inner.grad_norm;
    };

    // Continuation over the penalty schedule, then extra multiplier updates at the final weight.
    constexpr int kExtraOuter = 30;
    const std::size_t stages = params.penalty_schedule.size() + kExtraOuter;
    InnerResult inner;
    for (std::size_t s = 0; s < stages; ++s) {
        const double mu = params.penalty_schedule[std::min(s, params.penalty_schedule.size() - 1)];
        const Lagrangian L{prob, mu, lambda};
        inner = minimize(L, x, params, prob.ds);
        report.iterations += inner.iterations;
        if (prob.A.rows() > 0) lambda = (lambda - mu * (prob.A * x - prob.b)).cwiseMax(0.0);
        if (inner.grad_norm <= params.grad_tol && violation(x) <= viol_tol) {
            finish(inner);
            return report;
        }
        if (prob.A.rows() == 0 && inner.grad_norm > params.grad_tol && s + 1 >= params.penalty_schedule.size()) break;
    }
    finish(inner);
    std::ostringstream msg;
    msg << "solve_op: no convergence (grad norm " << report.grad_norm << ", max violation " << report.max_violation
        << ", " << constraints.size() << " constraints)";
    throw SolveError(msg.str(), report);
}

AngularField solve_op(const RootCurve& curve, const Environment& env, const CostParams& params) {
    return solve_op_report(curve, env, params).omega;
}

}  // namespace rootsim
