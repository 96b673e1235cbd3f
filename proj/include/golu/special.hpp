#pragma once

#include <cmath>
#include <numbers>

namespace golu::special {

// erf / erfc
//
// W. J. Cody's rational Chebyshev approximations (Math. Comp. 1969), three
// ranges on y = |x|:
//   y <= 0.46875     erf  = x R1(y^2)
//   0.46875 < y <= 4 erfc = exp(-y^2) R2(y)
//   y > 4            erfc = exp(-y^2)/y (1/sqrt(pi) - R3(1/y^2))
// exp(-y^2) is split as exp(-z^2) exp(-(y - z)(y + z)) with z = y rounded down
// to a multiple of 1/16, which keeps the product exact enough for relative
// accuracy deep in the tail. Every branch is a fixed-length polynomial, so the
// cost per call is one or two exp plus about 20 flops.
// Relative error is a few ulp for erf everywhere and for erfc until it
// underflows (y > 26.543 returns 0).

namespace detail {

inline constexpr double kErfSwitch = 0.46875;
inline constexpr double kErfcZero = 26.543;

inline constexpr double kA[5] = {3.16112374387056560e00, 1.13864154151050156e02, 3.77485237685302021e02,
                                 3.20937758913846947e03, 1.85777706184603153e-1};
inline constexpr double kB[4] = {2.36012909523441209e01, 2.44024637934444173e02, 1.28261652607737228e03,
                                 2.84423683343917062e03};
inline constexpr double kC[9] = {5.64188496988670089e-1, 8.88314979438837594e00, 6.61191906371416295e01,
                                 2.98635138197400131e02, 8.81952221241769090e02, 1.71204761263407058e03,
                                 2.05107837782607147e03, 1.23033935479799725e03, 2.15311535474403846e-8};
inline constexpr double kD[8] = {1.57449261107098347e01, 1.17693950891312499e02, 5.37181101862009858e02,
                                 1.62138957456669019e03, 3.29079923573345963e03, 4.36261909014324716e03,
                                 3.43936767414372164e03, 1.23033935480374942e03};
inline constexpr double kP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
                                 1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2};
inline constexpr double kQ[5] = {2.56852019228982242e00, 1.87295284992346725e00, 5.27905102951428412e-1,
                                 6.05183413124413191e-2, 2.33520497626869185e-3};

// erf(x) for |x| <= kErfSwitch.
inline double erf_small(double x) {
    const double ysq = x * x;
    double num = kA[4] * ysq;
    double den = ysq;
    for (int i = 0; i < 3; ++i) {
        num = (num + kA[i]) * ysq;
        den = (den + kB[i]) * ysq;
    }
    return x * (num + kA[3]) / (den + kB[3]);
}

// erfc(y) for y > kErfSwitch.
inline double erfc_large(double y) {
    if (y > kErfcZero) {
        return 0.0;
    }
    double r;
    if (y <= 4.0) {
        double num = kC[8] * y;
        double den = y;
        for (int i = 0; i < 7; ++i) {
            num = (num + kC[i]) * y;
            den = (den + kD[i]) * y;
        }
        r = (num + kC[7]) / (den + kD[7]);
    } else {
        const double z = 1.0 / (y * y);
        double num = kP[5] * z;
        double den = z;
        for (int i = 0; i < 4; ++i) {
            num = (num + kP[i]) * z;
            den = (den + kQ[i]) * z;
        }
        r = z * (num + kP[4]) / (den + kQ[4]);
        r = (std::numbers::inv_sqrtpi - r) / y;
    }
    const double z = std::trunc(y * 16.0) / 16.0;
    const double del = (y - z) * (y + z);
    return std::exp(-z * z) * std::exp(-del) * r;
}

} // namespace detail

inline double erf(double x) {
    if (std::isnan(x)) {
        return x;
    }
    const double ax = std::fabs(x);
    if (ax <= detail::kErfSwitch) {
        return detail::erf_small(x);
    }
    const double r = (0.5 - detail::erfc_large(ax)) + 0.5;
    return x < 0.0 ? -r : r;
}

inline double erfc(double x) {
    if (std::isnan(x)) {
        return x;
    }
    const double ax = std::fabs(x);
    if (ax <= detail::kErfSwitch) {
        return 1.0 - detail::erf_small(x);
    }
    const double tail = detail::erfc_large(ax);
    return x < 0.0 ? 2.0 - tail : tail;
}

/// Standard normal density.
inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

/// Standard normal CDF. Uses erfc so the left tail keeps full relative precision.
inline double normal_cdf(double x) {
    return 0.5 * erfc(-x / std::numbers::sqrt2);
}

/// Logistic sigmoid, evaluated on the side that does not overflow.
inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// ln(1 + e^x) without overflow for large x or loss of precision for very negative x.
inline double softplus(double x) {
    if (x > 20.0) {
        return x + std::log1p(std::exp(-x));
    }
    // For x < -20, e^x is tiny and log1p returns e^x - e^{2x}/2 to rounding.
    return std::log1p(std::exp(x));
}

} // namespace golu::special
