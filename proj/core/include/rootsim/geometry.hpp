#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "rootsim/vec3.hpp"

namespace rootsim {

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major 3x3 rotation matrix.
struct RotationMatrix {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double operator()(int row, int col) const { return m[static_cast<std::size_t>(3 * row + col)]; }
    Vec3 apply(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Vec3 operator*(const Vec3& v) const { return apply(v); }
    RotationMatrix operator*(const RotationMatrix& o) const;
    RotationMatrix transposed() const;
    double determinant() const;
    /// Max entry of |R^T R - I|.
    double orthogonality_error() const;
};

/// exp([w]_x) by the Rodrigues closed form; Taylor branch for |w| < 1e-8.
RotationMatrix rotation_from_angular(const Vec3& w);

/// Angular-velocity samples, one per curve node, with the quadrature weight ds.
struct AngularField {
    std::vector<Vec3> values;
    double ds{0.0};

    AngularField() = default;
    AngularField(std::size_t count, double ds_) : values(count), ds(ds_) {}
    AngularField(std::vector<Vec3> v, double ds_) : values(std::move(v)), ds(ds_) {}

    std::size_t size() const { return values.size(); }
    /// sqrt(ds * sum |w_i|^2)
    double l2_norm() const;
    AngularField scaled(double factor) const;
};

/// Arc-length discretized curve. nodes[0] is the fixed base; consecutive nodes are ds apart.
class RootCurve {
public:
    RootCurve() = default;
    /// Requires ds > 0 and at least one node; spacing is checked by check_arc_length().
    RootCurve(std::vector<Vec3> nodes, double ds);

    /// Straight curve of `segments` segments from `base` along the unit direction `dir`.
    static RootCurve straight(const Vec3& base, const Vec3& dir, std::size_t segments, double ds);

    const std::vector<Vec3>& nodes() const { return nodes_; }
    std::span<const Vec3> view() const { return nodes_; }
    const Vec3& operator[](std::size_t i) const { return nodes_[i]; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t segment_count() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }
    double ds() const { return ds_; }
    double length() const { return static_cast<double>(segment_count()) * ds_; }
    const Vec3& base() const { return nodes_.front(); }
    const Vec3& tip() const { return nodes_.back(); }

    /// Max over segments of | |n_{i+1} - n_i| - ds | / ds.
    double max_spacing_error() const;
    /// Throws GeometryError when some segment deviates from ds by more than rel_tol * ds.
    void check_arc_length(double rel_tol = 1e-6) const;

    /// First `count` nodes, 1 <= count <= node_count().
    RootCurve prefix(std::size_t count) const;
    RootCurve with_node(const Vec3& p) const;

    bool operator==(const RootCurve&) const = default;

private:
    std::vector<Vec3> nodes_;
    double ds_{1.0};
};

/// Unit forward-difference tangents, one per node; the tip repeats the last segment.
std::vector<Vec3> tangent_field(const RootCurve& curve);

/// Direction of the last segment.
Vec3 tip_tangent(const RootCurve& curve);

/// Rotation-based deformation of the curve by the angular field:
/// node_{i+1} = node_i + R[ds * sum_{j<=i} w_j] (node_{i+1} - node_i).
RootCurve deform_curve(const RootCurve& curve, const AngularField& omega);

/// Angle in [0, pi] between two nonzero vectors.
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace rootsim
