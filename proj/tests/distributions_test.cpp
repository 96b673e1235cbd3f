#include <golu/distributions.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

using namespace golu;

TEST(DensityProfile, EveryDensityIntegratesToOne) {
    for (GateKind kind : kAllGates) {
        const auto p = density_profile(kind);
        EXPECT_NEAR(p.mass, 1.0, 1e-6) << gate_name(kind);
        for (double v : p.pdf) {
            ASSERT_GE(v, 0.0);
        }
    }
}

TEST(DensityProfile, GumbelMoments) {
    const auto p = density_profile(GateKind::Gompertz, -20.0, 40.0, 60001);
    EXPECT_NEAR(p.mean, std::numbers::egamma, 1e-4);
    EXPECT_NEAR(p.variance, std::numbers::pi * std::numbers::pi / 6.0, 1e-4);
    EXPECT_NEAR(p.skewness, 1.1395470994046487, 1e-2);
    EXPECT_NEAR(p.mode, 0.0, 1e-3);
}

TEST(DensityProfile, EvenDensitiesHaveNoSkew) {
    const auto logistic = density_profile(GateKind::Sigmoid, -40.0, 40.0, 80001);
    EXPECT_NEAR(logistic.skewness, 0.0, 1e-6);
    EXPECT_NEAR(logistic.variance, std::numbers::pi * std::numbers::pi / 3.0, 1e-6);
    const auto normal = density_profile(GateKind::GaussianCDF, -40.0, 40.0, 80001);
    EXPECT_NEAR(normal.skewness, 0.0, 1e-6);
    EXPECT_NEAR(normal.variance, 1.0, 1e-9);
}

TEST(DensityProfile, FlippingNegatesSkewness) {
    const auto mish = density_profile(GateKind::MishGate);
    const auto fmish = density_profile(GateKind::FMishGate);
    EXPECT_GT(fmish.skewness, 0.0);
    EXPECT_NEAR(mish.skewness, -fmish.skewness, 1e-9);
    EXPECT_NEAR(mish.mean, -fmish.mean, 1e-9);
    // Quadrature oracle for the Mish density.
    EXPECT_NEAR(mish.mean, -0.43882457311747565, 1e-6);
    EXPECT_NEAR(mish.variance, 2.056167583560283, 1e-6);
    EXPECT_NEAR(mish.skewness, -0.65726706900619934, 1e-6);

    const auto gumbel = density_profile(GateKind::Gompertz);
    const auto flipped = density_profile(GateKind::FlippedGompertz);
    EXPECT_NEAR(flipped.skewness, -gumbel.skewness, 1e-9);
}

TEST(DensityProfile, RejectsBadGrids) {
    EXPECT_THROW(density_profile(GateKind::Sigmoid, 1.0, -1.0, 1000), UsageError);
    EXPECT_THROW(density_profile(GateKind::Sigmoid, -40.0, 40.0, 99), UsageError);
    // Window misses most of the mass.
    EXPECT_THROW(density_profile(GateKind::Gompertz, 2.0, 40.0, 1000), ResolutionError);
}

TEST(GateGap, LeadingCoefficientIsOneHalf) {
    for (double x = 6.0; x <= 15.0; x += 0.05) {
        const GateGap g = sigmoid_gompertz_gap(x);
        EXPECT_GE(g.normalized, 0.45) << x;
        EXPECT_LE(g.normalized, 0.55) << x;
    }
}

TEST(GateGap, MatchesHighPrecisionReference) {
    struct Ref {
        double x;
        double gap;
        double normalized;
    };
    const Ref refs[] = {
        {6.0, 3.0594506126841893e-6, 0.49794024632415898},
        {8.0, 5.6236140037374354e-8, 0.49972055561886624},
        {10.0, 1.0304988350990201e-9, 0.49996216870037736},
        {12.0, 1.8875479429192075e-11, 0.49999487985921704},
        {15.0, 4.678809098988776e-14, 0.49999974508148926},
    };
    for (const auto& r : refs) {
        const GateGap g = sigmoid_gompertz_gap(r.x);
        EXPECT_NEAR(g.gap / r.gap, 1.0, 1e-8) << r.x;
        EXPECT_NEAR(g.normalized, r.normalized, 1e-8) << r.x;
    }
}

TEST(GateGap, ApproachesOneHalfFromBelow) {
    double prev = 0.0;
    for (double x = 6.0; x <= 15.0; x += 1.0) {
        const double n = sigmoid_gompertz_gap(x).normalized;
        EXPECT_GT(n, prev);
        EXPECT_LT(n, 0.5);
        prev = n;
    }
}

} // namespace
