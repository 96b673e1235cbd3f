#pragma once

// Gate functions g(x) of self-gated activations f(x) = x * g(x), viewed as
// CDFs, together with the densities D(x) = g'(x) they integrate.

#include <golu/errors.hpp>
#include <golu/special.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace golu {

enum class GateKind {
    Gompertz,        // e^{-e^{-x}}, CDF of the standard Gumbel distribution
    GaussianCDF,     // Phi(x)
    Sigmoid,         // 1 / (1 + e^{-x})
    MishGate,        // tanh(softplus(x))
    FMishGate,       // 1 - tanh(softplus(-x)), Mish density reflected about x = 0
    FlippedGompertz, // 1 - e^{-e^{x}}, Gumbel density reflected about x = 0
};

inline constexpr std::array<GateKind, 6> kAllGates = {
    GateKind::Gompertz, GateKind::GaussianCDF,     GateKind::Sigmoid,
    GateKind::MishGate, GateKind::FMishGate,       GateKind::FlippedGompertz,
};

/// Below this input the Gompertz gate (and GoLU) is flushed to exactly zero.
/// The true gate value there, e^{-e^{30}}, is far below the smallest subnormal.
inline constexpr double kGompertzCutoff = -30.0;

inline std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::Gompertz: return "gompertz";
    case GateKind::GaussianCDF: return "gaussian_cdf";
    case GateKind::Sigmoid: return "sigmoid";
    case GateKind::MishGate: return "mish_gate";
    case GateKind::FMishGate: return "fmish_gate";
    case GateKind::FlippedGompertz: return "flipped_gompertz";
    }
    return "unknown";
}

inline std::optional<GateKind> parse_gate(std::string_view name) {
    for (GateKind kind : kAllGates) {
        if (gate_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

namespace gate_detail {

// Mish-family gates. With E = e^x, e^{softplus(x)} = 1 + E and
//   tanh(softplus(x)) = ((1 + E)^2 - 1) / ((1 + E)^2 + 1).
// For x >= 0 this is evaluated as 1 - 2 / (1 + (1 + E)^2); for x < 0 as
// n / (n + 2) with n = E (2 + E), so no branch subtracts nearly equal numbers.
// Every step is a monotone rounded operation, which keeps the computed gates
// monotone in x. The densities use s = sigmoid(x), t = sigmoid(-x).

inline double gompertz(double x) {
    if (x < kGompertzCutoff) {
        return 0.0;
    }
    return std::exp(-std::exp(-x));
}

/// Gumbel(0, 1) density e^{-(x + e^{-x})}.
inline double gumbel_density(double x) {
    if (x < kGompertzCutoff) {
        return 0.0;
    }
    return std::exp(-(x + std::exp(-x)));
}

inline double mish_gate(double x) {
    if (x >= 0.0) {
        const double p = 1.0 + std::exp(x);
        return 1.0 - 2.0 / (1.0 + p * p);
    }
    const double e = std::exp(x);
    return 1.0 / (1.0 + 2.0 / (e * (2.0 + e)));
}

// d/dx tanh(softplus(x)) = sech^2(softplus(x)) * sigmoid(x).
// With sech^2(softplus(x)) = 4 t^2 / (1 + t^2)^2 this becomes 4 s t^2 / (1 + t^2)^2.
inline double mish_density(double x) {
    const double s = special::sigmoid(x);
    const double t = special::sigmoid(-x);
    const double q = 1.0 + t * t;
    return 4.0 * s * t * t / (q * q);
}

// 1 - mish_gate(-x), rearranged the same way.
inline double fmish_gate(double x) {
    const double e = std::exp(-x);
    if (x <= 0.0) {
        const double p = 1.0 + e;
        return 2.0 / (1.0 + p * p);
    }
    return 2.0 / (2.0 + e * (2.0 + e));
}

inline double fmish_density(double x) {
    const double s = special::sigmoid(x);
    const double t = special::sigmoid(-x);
    const double q = 1.0 + s * s;
    return 4.0 * s * s * t / (q * q);
}

inline double flipped_gompertz(double x) {
    if (x > -kGompertzCutoff) {
        return 1.0;
    }
    return -std::expm1(-std::exp(x));
}

inline double flipped_gumbel_density(double x) {
    if (x > -kGompertzCutoff) {
        return 0.0;
    }
    return std::exp(x - std::exp(x));
}

inline double value(GateKind kind, double x) {
    switch (kind) {
    case GateKind::Gompertz: return gompertz(x);
    case GateKind::GaussianCDF: return special::normal_cdf(x);
    case GateKind::Sigmoid: return special::sigmoid(x);
    case GateKind::MishGate: return mish_gate(x);
    case GateKind::FMishGate: return fmish_gate(x);
    case GateKind::FlippedGompertz: return flipped_gompertz(x);
    }
    return 0.0;
}

inline double density(GateKind kind, double x) {
    switch (kind) {
    case GateKind::Gompertz: return gumbel_density(x);
    case GateKind::GaussianCDF: return special::normal_pdf(x);
    case GateKind::Sigmoid: {
        return special::sigmoid(x) * special::sigmoid(-x);
    }
    case GateKind::MishGate: return mish_density(x);
    case GateKind::FMishGate: return fmish_density(x);
    case GateKind::FlippedGompertz: return flipped_gumbel_density(x);
    }
    return 0.0;
}

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": input must be finite");
    }
}

} // namespace gate_detail

/// Gate value g(x) in [0, 1].
inline double gate_value(GateKind kind, double x) {
    gate_detail::require_finite(x, "gate_value");
    return gate_detail::value(kind, x);
}

/// Density D(x) = g'(x) underlying the gate.
inline double gate_density(GateKind kind, double x) {
    gate_detail::require_finite(x, "gate_density");
    return gate_detail::density(kind, x);
}

/// Gate of the reflected density D(-x), i.e. x -> 1 - g(-x).
inline GateKind flip_gate(GateKind kind) {
    switch (kind) {
    case GateKind::Gompertz: return GateKind::FlippedGompertz;
    case GateKind::FlippedGompertz: return GateKind::Gompertz;
    case GateKind::MishGate: return GateKind::FMishGate;
    case GateKind::FMishGate: return GateKind::MishGate;
    case GateKind::GaussianCDF:
    case GateKind::Sigmoid: return kind; // even densities
    }
    return kind;
}

} // namespace golu
