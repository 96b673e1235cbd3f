#include <golu/gates.hpp>
#include <golu/special.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace {

using namespace golu;

TEST(Gates, ValuesAtTheOrigin) {
    EXPECT_DOUBLE_EQ(gate_value(GateKind::Gompertz, 0.0), std::exp(-1.0));
    EXPECT_EQ(gate_value(GateKind::Sigmoid, 0.0), 0.5);
    EXPECT_EQ(gate_value(GateKind::GaussianCDF, 0.0), 0.5);
    EXPECT_NEAR(gate_value(GateKind::MishGate, 0.0), 0.6, 1e-16);   // tanh(ln 2)
    EXPECT_NEAR(gate_value(GateKind::FMishGate, 0.0), 0.4, 1e-16);  // 1 - tanh(ln 2)
    EXPECT_NEAR(gate_value(GateKind::FlippedGompertz, 0.0), 1.0 - std::exp(-1.0), 1e-16);
}

TEST(Gates, DensitiesAtSelectedPoints) {
    EXPECT_DOUBLE_EQ(gate_density(GateKind::Gompertz, 0.0), std::exp(-1.0));
    EXPECT_EQ(gate_density(GateKind::Sigmoid, 0.0), 0.25);
    EXPECT_DOUBLE_EQ(gate_density(GateKind::GaussianCDF, 0.0), special::normal_pdf(0.0));
    // e^{-(-5 + e^5)} = e^{-143.41...}
    EXPECT_NEAR(gate_density(GateKind::Gompertz, -5.0), std::exp(5.0 - std::exp(5.0)), 1e-75);
    EXPECT_LT(gate_density(GateKind::Gompertz, -5.0), 1e-60);
}

TEST(Gates, DensityIsTheDerivativeOfTheGate) {
    for (GateKind kind : kAllGates) {
        for (double x = -12.0; x <= 12.0; x += 0.25) {
            const double h = 1e-5;
            const double fd = (gate_value(kind, x + h) - gate_value(kind, x - h)) / (2.0 * h);
            EXPECT_NEAR(gate_density(kind, x), fd, 1e-9) << gate_name(kind) << " at " << x;
        }
    }
}

TEST(Gates, MonotoneWithUnitLimits) {
    for (GateKind kind : kAllGates) {
        double prev = gate_value(kind, -60.0);
        EXPECT_NEAR(prev, 0.0, 1e-25) << gate_name(kind);
        for (double x = -60.0; x <= 60.0; x += 0.01) {
            const double v = gate_value(kind, x);
            EXPECT_GE(v, prev) << gate_name(kind) << " at " << x;
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
            prev = v;
        }
        EXPECT_EQ(gate_value(kind, 60.0), 1.0) << gate_name(kind);
    }
}

TEST(Gates, GompertzBelowSigmoidAndGaussianCdf) {
    for (int i = 0; i <= 2000; ++i) {
        const double x = -10.0 + 0.01 * i;
        const double g = gate_value(GateKind::Gompertz, x);
        EXPECT_LT(g, gate_value(GateKind::Sigmoid, x)) << x;
        EXPECT_LT(g, gate_value(GateKind::GaussianCDF, x)) << x;
    }
}

TEST(Gates, GompertzCutoff) {
    EXPECT_EQ(gate_value(GateKind::Gompertz, -30.0 - 1e-9), 0.0);
    EXPECT_EQ(gate_density(GateKind::Gompertz, -31.0), 0.0);
    EXPECT_EQ(gate_value(GateKind::FlippedGompertz, 31.0), 1.0);
    EXPECT_EQ(gate_density(GateKind::FlippedGompertz, 31.0), 0.0);
}

TEST(Gates, FlipIsReflection) {
    for (GateKind kind : kAllGates) {
        const GateKind flipped = flip_gate(kind);
        EXPECT_EQ(flip_gate(flipped), kind);
        for (double x = -15.0; x <= 15.0; x += 0.125) {
            EXPECT_NEAR(gate_value(flipped, x), 1.0 - gate_value(kind, -x), 1e-12)
                << gate_name(kind) << " at " << x;
            EXPECT_NEAR(gate_density(flipped, x), gate_density(kind, -x), 1e-12)
                << gate_name(kind) << " at " << x;
        }
    }
    EXPECT_EQ(flip_gate(GateKind::MishGate), GateKind::FMishGate);
    EXPECT_EQ(flip_gate(GateKind::Sigmoid), GateKind::Sigmoid);
    EXPECT_EQ(flip_gate(GateKind::GaussianCDF), GateKind::GaussianCDF);
    EXPECT_EQ(flip_gate(GateKind::Gompertz), GateKind::FlippedGompertz);
}

TEST(Gates, FmishGateIsTheFlippedMishGate) {
    for (double x = -40.0; x <= 40.0; x += 0.01) {
        EXPECT_NEAR(gate_value(GateKind::FMishGate, x), 1.0 - gate_value(GateKind::MishGate, -x), 1e-12) << x;
    }
}

TEST(Gates, NonFiniteInputIsADomainError) {
    for (GateKind kind : kAllGates) {
        EXPECT_THROW(gate_value(kind, std::nan("")), DomainError);
        EXPECT_THROW(gate_density(kind, std::numeric_limits<double>::infinity()), DomainError);
    }
}

TEST(Gates, NamesRoundTrip) {
    for (GateKind kind : kAllGates) {
        EXPECT_EQ(parse_gate(gate_name(kind)), kind);
    }
    EXPECT_FALSE(parse_gate("logistic").has_value());
}

} // namespace
