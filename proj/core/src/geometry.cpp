#include "rootsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rootsim {

RotationMatrix RotationMatrix::operator*(const RotationMatrix& o) const {
    RotationMatrix r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
            r.m[static_cast<std::size_t>(3 * i + j)] = s;
        }
    }
    return r;
}

RotationMatrix RotationMatrix::transposed() const {
    RotationMatrix r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[static_cast<std::size_t>(3 * i + j)] = (*this)(j, i);
    return r;
}

double RotationMatrix::determinant() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double RotationMatrix::orthogonality_error() const {
    const RotationMatrix p = transposed() * (*this);
    double err = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) err = std::max(err, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
    return err;
}

RotationMatrix rotation_from_angular(const Vec3& w) {
    // exp(A) = I + a A + b A^2 with A = [w]_x, a = sin(t)/t, b = (1 - cos t)/t^2.
    const double t2 = norm2(w);
    const double t = std::sqrt(t2);
    double a, b;
    if (t < 1e-8) {
        a = 1.0 - t2 / 6.0;
        b = 0.5 - t2 / 24.0;
    } else {
        a = std::sin(t) / t;
        b = (1.0 - std::cos(t)) / t2;
    }
    const double x = w.x, y = w.y, z = w.z;
    // A^2 = w w^T - |w|^2 I
    RotationMatrix r;
    r.m = {1.0 + b * (x * x - t2), -a * z + b * x * y,       a * y + b * x * z,
           a * z + b * x * y,       1.0 + b * (y * y - t2), -a * x + b * y * z,
           -a * y + b * x * z,      a * x + b * y * z,       1.0 + b * (z * z - t2)};
    return r;
}

namespace {

// R[w] d - d = a (w x d) + b w x (w x d)
Vec3 rotation_delta(const Vec3& w, const Vec3& d) {
    const double t2 = norm2(w);
    double a, b;
    if (t2 < 1e-16) {
        a = 1.0 - t2 / 6.0;
        b = 0.5 - t2 / 24.0;
    } else {
        const double t = std::sqrt(t2);
        a = std::sin(t) / t;
        b = (1.0 - std::cos(t)) / t2;
    }
    const Vec3 wd = cross(w, d);
    return wd * a + cross(w, wd) * b;
}

}  // namespace

double AngularField::l2_norm() const {
    double s = 0.0;
    for (const auto& w : values) s += norm2(w);
    return std::sqrt(ds * s);
}

AngularField AngularField::scaled(double factor) const {
    AngularField out = *this;
    for (auto& w : out.values) w *= factor;
    return out;
}

RootCurve::RootCurve(std::vector<Vec3> nodes, double ds) : nodes_(std::move(nodes)), ds_(ds) {
    if (!(ds_ > 0.0) || !std::isfinite(ds_)) throw GeometryError("RootCurve: ds must be positive");
    if (nodes_.empty()) throw GeometryError("RootCurve: at least one node required");
    for (const auto& p : nodes_)
        if (!is_finite(p)) throw GeometryError("RootCurve: non-finite node");
}

RootCurve RootCurve::straight(const Vec3& base, const Vec3& dir, std::size_t segments, double ds) {
    const Vec3 u = dir / norm(dir);
    std::vector<Vec3> nodes;
    nodes.reserve(segments + 1);
    for (std::size_t i = 0; i <= segments; ++i) nodes.push_back(base + u * (static_cast<double>(i) * ds));
    return RootCurve(std::move(nodes), ds);
}

double RootCurve::max_spacing_error() const {
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        err = std::max(err, std::abs(norm(nodes_[i + 1] - nodes_[i]) - ds_) / ds_);
    return err;
}

void RootCurve::check_arc_length(double rel_tol) const {
    const double err = max_spacing_error();
    if (err > rel_tol)
        throw GeometryError("RootCurve: segment length deviates from ds by " + std::to_string(err) +
                            " (relative)");
}

RootCurve RootCurve::prefix(std::size_t count) const {
    if (count < 1 || count > nodes_.size()) throw GeometryError("RootCurve::prefix: count out of range");
    return RootCurve(std::vector<Vec3>(nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(count)), ds_);
}

RootCurve RootCurve::with_node(const Vec3& p) const {
    RootCurve out = *this;
    out.nodes_.push_back(p);
    return out;
}

std::vector<Vec3> tangent_field(const RootCurve& curve) {
    const auto& p = curve.nodes();
    if (p.size() < 2) throw GeometryError("tangent_field: curve needs at least two nodes");
    std::vector<Vec3> k(p.size());
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const Vec3 d = p[i + 1] - p[i];
        const double len = norm(d);
        if (len < 1e-12 * curve.ds())
            throw GeometryError("tangent_field: degenerate segment " + std::to_string(i) +
                                " (corrupted curve)");
        k[i] = d / len;
    }
    k.back() = k[p.size() - 2];
    return k;
}

Vec3 tip_tangent(const RootCurve& curve) {
    const auto& p = curve.nodes();
    if (p.size() < 2) throw GeometryError("tip_tangent: curve needs at least two nodes");
    const Vec3 d = p.back() - p[p.size() - 2];
    const double len = norm(d);
    if (len < 1e-12 * curve.ds()) throw GeometryError("tip_tangent: degenerate last segment");
    return d / len;
}

RootCurve deform_curve(const RootCurve& curve, const AngularField& omega) {
    const auto& p = curve.nodes();
    if (omega.size() < curve.segment_count())
        throw GeometryError("deform_curve: angular field shorter than the curve");
    // Accumulate the displacement (R - I) d per segment so that a zero field is an exact identity.
    std::vector<Vec3> out(p.size());
    out[0] = p[0];
    Vec3 theta{};
    Vec3 shift{};
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        theta += omega.values[i] * curve.ds();
        shift += rotation_delta(theta, p[i + 1] - p[i]);
        out[i + 1] = p[i + 1] + shift;
    }
    return RootCurve(std::move(out), curve.ds());
}

double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

}  // namespace rootsim
