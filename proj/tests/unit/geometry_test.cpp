#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rootsim/geometry.hpp"
#include "test_support.hpp"

namespace rootsim {
namespace {

using testing::kPi;

TEST(Rotation, ZeroIsIdentity) {
    const RotationMatrix R = rotation_from_angular({0, 0, 0});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(R(i, j), i == j ? 1.0 : 0.0);
}

TEST(Rotation, QuarterTurnAboutZ) {
    const Vec3 r = rotation_from_angular({0, 0, kPi / 2}) * Vec3{1, 0, 0};
    EXPECT_NEAR(r.x, 0.0, 1e-12);
    EXPECT_NEAR(r.y, 1.0, 1e-12);
    EXPECT_NEAR(r.z, 0.0, 1e-12);
}

TEST(Rotation, SmallAngleMatchesLinearization) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 1000; ++t) {
        const Vec3 w = testing::random_unit(rng) * std::pow(10.0, -1.0 - 6.0 * (t % 7) / 6.0);
        const Vec3 v = testing::random_vec(rng, 3.0);
        const Vec3 diff = rotation_from_angular(w) * v - (v + cross(w, v));
        EXPECT_LE(norm(diff), norm2(w) * norm(v) + 1e-15);
    }
}

TEST(Rotation, OrthogonalUpToLargeAngles) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> mag(0.0, 1000.0);
    for (int t = 0; t < 10000; ++t) {
        const RotationMatrix R = rotation_from_angular(testing::random_unit(rng) * mag(rng));
        EXPECT_LE(R.orthogonality_error(), 1e-12);
        EXPECT_NEAR(R.determinant(), 1.0, 1e-12);
    }
}

TEST(Rotation, TaylorBranchIsContinuous) {
    // Both sides of the series cutoff agree with I + [w] + [w]^2 / 2 far below rounding.
    const Vec3 axis = Vec3{1, 2, 3} / norm(Vec3{1, 2, 3});
    const Vec3 v{0.3, -0.7, 0.2};
    for (double a : {0.99e-8, 1.01e-8}) {
        const Vec3 w = axis * a;
        const Vec3 second = v + cross(w, v) + 0.5 * cross(w, cross(w, v));
        EXPECT_LE(norm(rotation_from_angular(w) * v - second), 1e-16);
    }
}

TEST(Rotation, PreservesAxis) {
    const Vec3 w{0.3, -1.2, 0.7};
    const Vec3 r = rotation_from_angular(w) * w;
    EXPECT_NEAR(norm(r - w), 0.0, 1e-14);
}

TEST(RootCurve, RejectsBadInput) {
    EXPECT_THROW(RootCurve({}, 0.1), GeometryError);
    EXPECT_THROW(RootCurve({{0, 0, 0}}, 0.0), GeometryError);
    EXPECT_THROW(RootCurve({{0, 0, 0}}, -1.0), GeometryError);
    EXPECT_THROW(RootCurve({{0, NAN, 0}}, 0.1), GeometryError);
}

TEST(RootCurve, StraightHasExactSpacing) {
    const RootCurve c = RootCurve::straight({1, 2, 0}, {0, -1, 0}, 10, 0.05);
    EXPECT_EQ(c.node_count(), 11u);
    EXPECT_DOUBLE_EQ(c.length(), 0.5);
    EXPECT_LE(c.max_spacing_error(), 1e-12);
    EXPECT_NO_THROW(c.check_arc_length());
    EXPECT_EQ(c.base(), (Vec3{1, 2, 0}));
}

TEST(RootCurve, ArcLengthCheckCatchesStretch) {
    const RootCurve c({{0, 0, 0}, {0.1, 0, 0}, {0.2001, 0, 0}}, 0.1);
    EXPECT_THROW(c.check_arc_length(), GeometryError);
}

TEST(RootCurve, PrefixAndAppend) {
    const RootCurve c = RootCurve::straight({0, 0, 0}, {1, 0, 0}, 5, 0.1);
    const RootCurve p = c.prefix(3);
    EXPECT_EQ(p.node_count(), 3u);
    EXPECT_EQ(p.tip(), c[2]);
    EXPECT_THROW(c.prefix(0), GeometryError);
    EXPECT_THROW(c.prefix(7), GeometryError);
    const RootCurve q = p.with_node(c[3]);
    EXPECT_EQ(q, c.prefix(4));
}

TEST(Tangents, StraightSegment) {
    const RootCurve c = RootCurve::straight({0, 0, 0}, {1, 0, 0}, 8, 0.1);
    for (const auto& k : tangent_field(c)) {
        EXPECT_NEAR(k.x, 1.0, 1e-15);
        EXPECT_NEAR(k.y, 0.0, 1e-15);
        EXPECT_NEAR(k.z, 0.0, 1e-15);
    }
}

TEST(Tangents, QuarterCircleMidpoint) {
    // Unit circle from angle 0 to pi/2 in 100 steps, nodes on the circle.
    const std::size_t n = 100;
    const double dth = kPi / 200.0;
    const double ds = 2.0 * std::sin(dth / 2.0);
    std::vector<Vec3> p;
    for (std::size_t i = 0; i <= n; ++i) p.push_back({std::cos(i * dth), std::sin(i * dth), 0.0});
    const RootCurve c(p, ds);
    const auto k = tangent_field(c);
    auto exact = [](double th) { return Vec3{-std::sin(th), std::cos(th), 0.0}; };
    // A forward difference is the tangent half a segment ahead of its node.
    EXPECT_LE(norm(k[n / 2] - exact((n / 2 + 0.5) * dth)), 1e-3);
    EXPECT_LE(norm(k[n / 2] - exact((n / 2) * dth)), 0.5 * dth + 1e-6);
    EXPECT_EQ(k.back(), k[n - 1]);
}

TEST(Tangents, CoincidentNodesThrow) {
    EXPECT_THROW(tangent_field(RootCurve({{0, 0, 0}, {0, 0, 0}, {0.1, 0, 0}}, 0.1)), GeometryError);
    EXPECT_THROW(tangent_field(RootCurve({{0, 0, 0}}, 0.1)), GeometryError);
}

TEST(Deform, ZeroFieldIsExactIdentity) {
    std::mt19937_64 rng(3);
    const RootCurve c = testing::random_space_curve(rng, 60, 0.03);
    EXPECT_EQ(deform_curve(c, AngularField(c.node_count(), c.ds())), c);
}

TEST(Deform, ConstantFieldBendsIntoArc) {
    const double ds = 0.01, curv = 2.0;
    const std::size_t segs = 100;
    const RootCurve c = RootCurve::straight({0, 0, 0}, {1, 0, 0}, segs, ds);
    AngularField w(c.node_count(), ds);
    for (auto& x : w.values) x = {0, 0, curv};
    const RootCurve arc = deform_curve(c, w);
    const double L = segs * ds;
    const Vec3 exact{std::sin(curv * L) / curv, (1.0 - std::cos(curv * L)) / curv, 0.0};
    EXPECT_LE(norm(arc.tip() - exact), 2.0 * curv * L * ds);
    EXPECT_EQ(arc.base(), c.base());
}

TEST(Deform, PreservesSegmentLengths) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const RootCurve c = testing::random_space_curve(rng, 80, 0.025);
        AngularField w(c.node_count(), c.ds());
        for (auto& x : w.values) x = testing::random_vec(rng, 20.0);
        const RootCurve d = deform_curve(c, w);
        EXPECT_LE(d.max_spacing_error(), 1e-9);
        EXPECT_EQ(d.base(), c.base());
    }
}

TEST(Deform, SizeMismatchThrows) {
    const RootCurve c = RootCurve::straight({0, 0, 0}, {1, 0, 0}, 3, 0.1);
    EXPECT_THROW(deform_curve(c, AngularField(2, 0.1)), GeometryError);
}

TEST(AngularFieldTest, L2Norm) {
    AngularField w(4, 0.25);
    w.values[1] = {3, 4, 0};
    EXPECT_DOUBLE_EQ(w.l2_norm(), std::sqrt(0.25 * 25.0));
    EXPECT_DOUBLE_EQ(w.scaled(2.0).l2_norm(), 2.0 * std::sqrt(0.25 * 25.0));
}

TEST(AngleBetween, Basic) {
    EXPECT_NEAR(angle_between({1, 0, 0}, {0, 2, 0}), kPi / 2, 1e-15);
    EXPECT_NEAR(angle_between({1, 0, 0}, {-1, 0, 0}), kPi, 1e-15);
    EXPECT_EQ(angle_between({1, 1, 0}, {2, 2, 0}), 0.0);
}

}  // namespace
}  // namespace rootsim
