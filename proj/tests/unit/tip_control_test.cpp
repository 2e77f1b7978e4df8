#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rootsim/tip_control.hpp"
#include "test_support.hpp"

namespace rootsim {
namespace {

TEST(FeedbackControl, ParallelGradientGivesZero) {
    const ControlParams p;
    EXPECT_EQ(feedback_control({1, 0, 0}, {3, 0, 0}, p), (Vec3{}));
}

TEST(FeedbackControl, HeadingStraightDownToPlane) {
    Environment env;  // target y = 0
    const Vec3 u = feedback_control({0, 5, 0}, {0, -1, 0}, env, ControlParams{});
    EXPECT_EQ(norm(u), 0.0);
}

TEST(FeedbackControl, ClipsExactlyAtBound) {
    const ControlParams p{4.0, 0.125};
    const Vec3 u = feedback_control({1, 0, 0}, {0, 1, 0}, p);
    EXPECT_EQ(u, (Vec3{0, 0, -4}));
    // No point of a fine grid over the ball does better.
    const double best = control_objective(u, {1, 0, 0}, {0, 1, 0}, p);
    const int n = 80;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k) {
                const Vec3 w{-4.0 + 8.0 * i / n, -4.0 + 8.0 * j / n, -4.0 + 8.0 * k / n};
                if (norm(w) > 4.0) continue;
                EXPECT_GE(control_objective(w, {1, 0, 0}, {0, 1, 0}, p), best - 1e-6);
            }
}

TEST(FeedbackControl, RejectsNonUnitTangent) {
    EXPECT_THROW(feedback_control({2, 0, 0}, {0, 1, 0}, ControlParams{}), std::invalid_argument);
}

TEST(FeedbackControl, ParamsValidate) {
    EXPECT_THROW((ControlParams{0.0, 0.1}).validate(), std::invalid_argument);
    EXPECT_THROW((ControlParams{1.0, 0.0}).validate(), std::invalid_argument);
    EXPECT_NO_THROW(ControlParams{}.validate());
}

TEST(FeedbackControl, NormBoundedAndOptimalAgainstSamples) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const ControlParams p{0.5 + 5.0 * u(rng), 0.01 + u(rng)};
        const Vec3 k = testing::random_unit(rng);
        const Vec3 g = testing::random_vec(rng, 3.0);
        const Vec3 w = feedback_control(k, g, p);
        EXPECT_LE(norm(w), p.kappa0 + 1e-12);
        const double best = control_objective(w, k, g, p);
        for (int s = 0; s < 10000; ++s) {
            const Vec3 c = testing::random_unit(rng) * (p.kappa0 * std::cbrt(u(rng)));
            EXPECT_GE(control_objective(c, k, g, p), best - 1e-12);
        }
    }
}

TEST(FeedbackControl, ScalingGradientKeepsDirection) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ControlParams p{4.0, 0.125};
    for (int t = 0; t < 200; ++t) {
        const Vec3 k = testing::random_unit(rng);
        const Vec3 g = testing::random_vec(rng, 2.0);
        const double lambda = 0.1 + 5.0 * u(rng);
        const Vec3 a = feedback_control(k, g, p);
        const Vec3 b = feedback_control(k, lambda * g, p);
        if (norm(a) < 1e-12) continue;
        EXPECT_LE(norm(a / norm(a) - b / norm(b)), 1e-9);
        const bool a_clipped = norm(cross(k, g)) / (2 * p.reg_eps) > p.kappa0;
        const bool b_clipped = lambda * norm(cross(k, g)) / (2 * p.reg_eps) > p.kappa0;
        if (!a_clipped && !b_clipped) EXPECT_LE(norm(b - lambda * a), 1e-12 * lambda * norm(a) + 1e-15);
    }
}

TEST(SteeringGradient, AddsExploration) {
    Environment env;
    env.explored.add({1, 0, 0}, 1.0);
    const Vec3 g = steering_gradient({0, 0, 0}, env);
    // Target pulls along +y, exploration points toward the explored sample.
    EXPECT_DOUBLE_EQ(g.y, 1.0);
    EXPECT_NEAR(g.x, std::exp(-1.0), 1e-15);
}

}  // namespace
}  // namespace rootsim
