#include <algorithm>
#include <cmath>

#include "rootsim/velocity_solver.hpp"

namespace rootsim {

namespace {

constexpr int kMaxSweeps = 1000;
constexpr double kSweepTol = 1e-10;
constexpr double kPreconditionTol = 1e-6;

Vec3 normalized(const Vec3& v) { return v / norm(v); }

}  // namespace

CurveFrames build_frames(const RootCurve& curve) {
    const std::vector<Vec3> k = tangent_field(curve);
    CurveFrames f;
    f.e1 = k;
    f.e2.resize(k.size());
    f.e3.resize(k.size());
    // Start from +z when possible so planar curves keep e2 = z everywhere.
    const Vec3 seed = std::abs(k[0].z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    Vec3 e2 = normalized(seed - dot(seed, k[0]) * k[0]);
    for (std::size_t i = 0; i < k.size(); ++i) {
        const Vec3 proj = e2 - dot(e2, k[i]) * k[i];
        if (norm(proj) < 1e-12) throw GeometryError("build_frames: tangent reversed between segments");
        e2 = normalized(proj);
        f.e2[i] = e2;
        f.e3[i] = cross(k[i], e2);
    }
    return f;
}

RecoveryReport recover_angular_velocity_report(const RootCurve& curve, const VelocityField& v) {
    const std::size_t n = curve.node_count();
    if (v.values.size() != n) throw RecoveryError("recover_angular_velocity: velocity size mismatch");
    RecoveryReport report;
    report.omega = AngularField(n, curve.ds());
    if (n < 2) return report;
    const double ds = curve.ds();
    const std::size_t segs = n - 1;

    double vmax = 0.0;
    for (const auto& x : v.values) vmax = std::max(vmax, norm(x));
    if (norm(v.values[0]) > kPreconditionTol * (1.0 + vmax))
        throw RecoveryError("recover_angular_velocity: base velocity is not zero");

    const CurveFrames fr = build_frames(curve);
    std::vector<double> z2(segs), z3(segs);
    std::vector<Vec3> D(segs);
    double dmax = 0.0;
    for (std::size_t i = 0; i < segs; ++i) {
        D[i] = (v.values[i + 1] - v.values[i]) / ds;
        dmax = std::max(dmax, norm(D[i]));
    }
    for (std::size_t i = 0; i < segs; ++i) {
        if (std::abs(dot(D[i], fr.e1[i])) > kPreconditionTol * (1.0 + dmax))
            throw RecoveryError("recover_angular_velocity: velocity stretches the curve");
        z2[i] = dot(D[i], fr.e2[i]);
        z3[i] = dot(D[i], fr.e3[i]);
    }

    // Source terms and frame derivatives per segment.
    std::vector<double> f2(segs), f3(segs);
    std::vector<Vec3> de2(segs), de3(segs);
    for (std::size_t i = 0; i < segs; ++i) {
        const double z2p = i == 0 ? 0.0 : z2[i - 1];
        const double z3p = i == 0 ? 0.0 : z3[i - 1];
        f3[i] = (z2[i] - z2p) / ds;
        f2[i] = -(z3[i] - z3p) / ds;
        de2[i] = i == 0 ? Vec3{} : (fr.e2[i] - fr.e2[i - 1]) / ds;
        de3[i] = i == 0 ? Vec3{} : (fr.e3[i] - fr.e3[i - 1]) / ds;
    }

    // Picard sweeps on w = f - K w, where K only couples to earlier segments.
    std::vector<double> w2(f2), w3(f3);
    std::vector<double> n2(segs), n3(segs);
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        Vec3 theta{};
        double change = 0.0;
        for (std::size_t i = 0; i < segs; ++i) {
            n2[i] = f2[i] - dot(theta, de2[i]);
            n3[i] = f3[i] - dot(theta, de3[i]);
            theta += ds * (w2[i] * fr.e2[i] + w3[i] * fr.e3[i]);
            change += ds * ((n2[i] - w2[i]) * (n2[i] - w2[i]) + (n3[i] - w3[i]) * (n3[i] - w3[i]));
        }
        w2.swap(n2);
        w3.swap(n3);
        report.sweeps = sweep;
        report.last_change = std::sqrt(change);
        if (report.last_change <= kSweepTol) break;
    }
    if (report.last_change > kSweepTol)
        throw RecoveryError("recover_angular_velocity: Picard sweeps did not converge");

    for (std::size_t i = 0; i < segs; ++i) report.omega.values[i] = w2[i] * fr.e2[i] + w3[i] * fr.e3[i];
    return report;
}

AngularField recover_angular_velocity(const RootCurve& curve, const VelocityField& v) {
    return recover_angular_velocity_report(curve, v).omega;
}

}  // namespace rootsim
