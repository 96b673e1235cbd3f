#pragma once

// Gauss–Hermite and Gauss–Legendre quadrature rules.

#include <golu/errors.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace golu {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule for the weight e^{-x^2} on the real line; weights sum to sqrt(pi).
///
/// Nodes start from the eigenvalues of the Jacobi matrix (Golub–Welsch) and are
/// polished by Newton steps on the orthonormal recurrence, which also yields
/// weights with full relative accuracy in the tails.
inline QuadratureRule gauss_hermite(std::size_t n) {
    if (n < 1 || n > 500) {
        throw UsageError("gauss_hermite: node count must lie in [1, 500]");
    }
    QuadratureRule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    if (n == 1) {
        r.weights[0] = std::sqrt(std::numbers::pi);
        return r;
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
    for (std::size_t j = 1; j < n; ++j) {
        sub[static_cast<Eigen::Index>(j - 1)] = std::sqrt(0.5 * static_cast<double>(j));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw ResolutionError("gauss_hermite: eigenvalue iteration failed");
    }
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = eig.eigenvalues()[static_cast<Eigen::Index>(i)];
        double pp = 0.0;
        for (int it = 0; it < 8; ++it) {
            double p1 = pim4;
            double p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double jd = static_cast<double>(j);
                p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * nd) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) <= 1e-15 * std::max(1.0, std::fabs(z))) {
                break;
            }
        }
        r.nodes[i] = z;
        r.weights[i] = 2.0 / (pp * pp);
    }
    // Symmetrize so odd moments vanish to rounding.
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
        const double w = 0.5 * (r.weights[i] + r.weights[n - 1 - i]);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        r.nodes[n / 2] = 0.0;
    }
    return r;
}

/// n-point rule on [a, b] with unit weight.
inline QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n < 1 || n > 10000) {
        throw UsageError("gauss_legendre: node count must lie in [1, 10000]");
    }
    QuadratureRule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    const std::size_t m = (n + 1) / 2;
    const double nd = static_cast<double>(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double jd = static_cast<double>(j);
                p1 = ((2.0 * jd + 1.0) * z * p2 - jd * p3) / (jd + 1.0);
            }
            pp = nd * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) <= 1e-16) {
                break;
            }
        }
        r.nodes[i] = mid - half * z;
        r.nodes[n - 1 - i] = mid + half * z;
        r.weights[i] = 2.0 * half / ((1.0 - z * z) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

} // namespace golu
