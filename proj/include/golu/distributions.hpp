#pragma once

#include <golu/errors.hpp>
#include <golu/gates.hpp>

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace golu {

/// Gate density sampled on an explicit grid, with its first three moments.
struct DensityProfile {
    GateKind kind = GateKind::Gompertz;
    std::vector<double> grid;
    std::vector<double> pdf;
    double mass = 0.0; ///< trapezoid integral of pdf over the grid
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0; ///< third standardized moment
    double mode = 0.0;     ///< grid point of maximal density
};

/// Default integration window for a gate's density: wide enough that the
/// density at both ends is below 1e-18. The Gumbel left tail dies
/// double-exponentially, so its window is shifted right (and mirrored for the
/// flipped Gumbel).
inline std::pair<double, double> default_density_window(GateKind kind) {
    switch (kind) {
    case GateKind::Gompertz: return {-20.0, 40.0};
    case GateKind::FlippedGompertz: return {-40.0, 20.0};
    default: return {-40.0, 40.0};
    }
}

/// Samples the density of `kind` on n equally spaced points over [lo, hi] and
/// computes mass, mean, variance and skewness by the trapezoid rule. Moments are
/// normalized by the integrated mass.
inline DensityProfile density_profile(GateKind kind, double lo, double hi, std::size_t n) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw UsageError("density_profile: need finite lo < hi");
    }
    if (n < 100) {
        throw UsageError("density_profile: need at least 100 grid points");
    }

    DensityProfile p;
    p.kind = kind;
    p.grid.resize(n);
    p.pdf.resize(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + step * static_cast<double>(i);
        p.grid[i] = x;
        p.pdf[i] = gate_detail::density(kind, x);
        if (p.pdf[i] > p.pdf[argmax]) {
            argmax = i;
        }
    }
    p.mode = p.grid[argmax];

    const auto trapezoid = [&](auto&& weight) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            acc += w * weight(p.grid[i]) * p.pdf[i];
        }
        return acc * step;
    };

    p.mass = trapezoid([](double) { return 1.0; });
    if (std::fabs(p.mass - 1.0) > 1e-3) {
        throw ResolutionError("density_profile: density integrates to " + std::to_string(p.mass) +
                              " on this grid (needs 1 +- 1e-3)");
    }
    p.mean = trapezoid([](double x) { return x; }) / p.mass;
    const double m = p.mean;
    p.variance = trapezoid([m](double x) { return (x - m) * (x - m); }) / p.mass;
    const double m3 = trapezoid([m](double x) {
                          const double d = x - m;
                          return d * d * d;
                      }) /
                      p.mass;
    p.skewness = p.variance > 0.0 ? m3 / std::pow(p.variance, 1.5) : 0.0;
    return p;
}

inline DensityProfile density_profile(GateKind kind, std::size_t n = 60001) {
    const auto [lo, hi] = default_density_window(kind);
    return density_profile(kind, lo, hi, n);
}

struct GateGap {
    double gap;        ///< sigmoid(x) - Gompertz(x)
    double normalized; ///< gap / e^{-2x}
};

/// Difference between the sigmoid and Gompertz gates for x >= 0.
///
/// Evaluated as (1 - Gompertz) - (1 - sigmoid) = -expm1(-e^{-x}) - sigmoid(-x), so
/// both terms are O(e^{-x}) and the O(e^{-2x}) result does not drown in the
/// rounding error of values near 1. The leading coefficient is 1/2:
/// gap = e^{-2x}/2 - 5 e^{-3x}/6 + ...
inline GateGap sigmoid_gompertz_gap(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("sigmoid_gompertz_gap: input must be finite");
    }
    const double u = std::exp(-x);
    const double gap = -std::expm1(-u) - special::sigmoid(-x);
    return GateGap{gap, gap * std::exp(2.0 * x)};
}

} // namespace golu
