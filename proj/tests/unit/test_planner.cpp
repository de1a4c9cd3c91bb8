#include <gtest/gtest.h>

#include <cmath>

#include "exdec/planner.hpp"

using namespace exdec;

TEST(Repetitions, VanishingNoiseNeedsNoRepeats) {
    EXPECT_NEAR(repetitions(1e-12, 0.5, 5, 10).R, 1.0, 1e-12);
    EXPECT_GT(repetitions(0.1, 0.5, 5, 10).R, 1.0);
}

TEST(Repetitions, ZeroToleranceIsUndefined) {
    auto r = repetitions(0.01, 0.0, 5, 10);
    EXPECT_TRUE(r.undefined);
    EXPECT_TRUE(std::isinf(r.R));
    EXPECT_THROW(repetitions(0.0, 0.5, 5, 10), InvalidParameter);
    EXPECT_THROW(repetitions(0.1, 0.5, 5, 0.5), InvalidParameter);
}

TEST(Repetitions, DoublingDepthCostsAboutFiftyFiveRuns) {
    EXPECT_NEAR(repetitions_approx(2.0), std::exp(4.0), 1e-12);
    EXPECT_NEAR(repetitions_approx(2.0), 55.0, 0.5);
    EXPECT_NEAR(repetitions_rescaled(2.0, 1e4), std::exp(4.0), 0.05);
}

TEST(DepthBoost, ClosedForm) {
    EXPECT_NEAR(depth_boost(std::exp(4.0), 1.0, 10.0).q, 20.0, 1e-12);
    auto b = depth_boost(std::exp(1.0), 1e-2, 10.0);
    EXPECT_NEAR(b.q, 100.0, 1e-9);
    EXPECT_NEAR(b.cap, 1e4, 1e-9);
    EXPECT_FALSE(b.clipped);
    EXPECT_LT(depth_boost(1.0 + 1e-12, 1.0, 10.0).q, 1e-4);
    EXPECT_THROW(depth_boost(1.0, 1.0, 10.0), InvalidParameter);
}

TEST(DepthBoost, CapIsEnforced) {
    auto b = depth_boost(std::exp(100.0), 1.0, 2.0);
    EXPECT_TRUE(b.clipped);
    EXPECT_EQ(b.q, 4.0);
}

TEST(DepthBoost, RoundTripsThroughRepetitions) {
    const double eps = 1e-2, q0 = 100.0, q = 150.0;
    const double a = std::sqrt(eps) * q / q0, x = q0 / std::sqrt(eps);
    const double R = repetitions_rescaled(a, x);
    EXPECT_NEAR(depth_boost(R, eps, q0).q, q, 1e-3 * q);
}

TEST(Footprint, Limits) {
    EXPECT_NEAR(footprint_logR(1e-3, 90.0, 1.0), 1e-3, 1e-18);
    EXPECT_NEAR(footprint_logR(1.0, 90.0, 0.25), 90.0, 1e-12);
    EXPECT_NEAR(footprint_logR(1.0, 90.0, 0.5), std::pow(90.0, 2.0 * (1.0 - std::sqrt(0.5))), 1e-12);
    EXPECT_NEAR(footprint_logR(1e-11, 90.0, 0.25), 90.0, 1e-9);
    EXPECT_THROW(footprint_logR(1e-3, 90.0, 0.0), InvalidParameter);
}

TEST(Footprint, Conventions) {
    EXPECT_DOUBLE_EQ(footprint_ratio(1.0), 0.25);
    EXPECT_DOUBLE_EQ(footprint_ratio(1.0, FootprintConvention::AsPrinted), 1.0 / 16.0);
    EXPECT_DOUBLE_EQ(footprint_ratio(0.5), 1.0);
}

TEST(CaseStudy, MagicStateDistillation) {
    auto r = magic_state_case_study();
    EXPECT_NEAR(r.A, 512.0 / 81.0, 1e-12);
    EXPECT_NEAR(r.epsilon, 512.0 / 81.0 * 1e-16 * 90.0, 1e-27);
    EXPECT_NEAR(r.epsilon, 5.8e-14, 0.05 * 5.8e-14);
    EXPECT_NEAR(r.eps_T, 1e-11, 1e-24);
    EXPECT_DOUBLE_EQ(r.qubit_ratio, 0.25);
    EXPECT_NEAR(r.spacetime_ratio, 0.40, 1e-12);
    EXPECT_NEAR(r.reading("block_exact").R, 2.62, 0.01);
    EXPECT_NEAR(r.reading("block_meas_rate_p").R, 3.16, 0.01);
    EXPECT_NEAR(r.reading("block_meas_rate_p_first_order").R, 3.19, 0.01);
    EXPECT_NEAR(r.reading("per_round").R, 1.27, 0.01);
    bool in_band = false;
    for (const auto& x : r.readings) in_band = in_band || (x.R >= 2.5 && x.R <= 3.5);
    EXPECT_TRUE(in_band);
}
