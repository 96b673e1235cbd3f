#pragma once

#include <golu/errors.hpp>
#include <golu/gates.hpp>
#include <golu/special.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace golu {

enum class ActivationTag { ReLU, LeakyReLU, ELU, GELU, Swish, Mish, GoLU, FMish };

/// An activation together with its fixed parameters.
///
/// LeakyReLU slope defaults to 0.01 and ELU alpha to 1; both must satisfy
/// 0 < slope < 1 and alpha > 0, enforced at construction.
class ActivationKind {
public:
    constexpr ActivationKind() = default;

    static constexpr ActivationKind relu() { return ActivationKind(ActivationTag::ReLU); }
    static ActivationKind leaky_relu(double slope = 0.01) {
        // Slope 1 (the identity) is admitted as a degenerate control case.
        if (!(slope > 0.0 && slope <= 1.0)) {
            throw UsageError("LeakyReLU slope must lie in (0, 1]");
        }
        ActivationKind k(ActivationTag::LeakyReLU);
        k.leaky_slope_ = slope;
        return k;
    }
    static ActivationKind elu(double alpha = 1.0) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) {
            throw UsageError("ELU alpha must be positive");
        }
        ActivationKind k(ActivationTag::ELU);
        k.elu_alpha_ = alpha;
        return k;
    }
    static constexpr ActivationKind gelu() { return ActivationKind(ActivationTag::GELU); }
    static constexpr ActivationKind swish() { return ActivationKind(ActivationTag::Swish); }
    static constexpr ActivationKind mish() { return ActivationKind(ActivationTag::Mish); }
    static constexpr ActivationKind golu() { return ActivationKind(ActivationTag::GoLU); }
    static constexpr ActivationKind fmish() { return ActivationKind(ActivationTag::FMish); }

    static ActivationKind from_tag(ActivationTag tag) {
        switch (tag) {
        case ActivationTag::LeakyReLU: return leaky_relu();
        case ActivationTag::ELU: return elu();
        default: return ActivationKind(tag);
        }
    }

    constexpr ActivationTag tag() const noexcept { return tag_; }
    constexpr double leaky_slope() const noexcept { return leaky_slope_; }
    constexpr double elu_alpha() const noexcept { return elu_alpha_; }

    friend constexpr bool operator==(const ActivationKind&, const ActivationKind&) = default;

private:
    explicit constexpr ActivationKind(ActivationTag tag) : tag_(tag) {}

    ActivationTag tag_ = ActivationTag::ReLU;
    double leaky_slope_ = 0.01;
    double elu_alpha_ = 1.0;
};

inline constexpr std::array<ActivationTag, 8> kAllActivationTags = {
    ActivationTag::ReLU,  ActivationTag::LeakyReLU, ActivationTag::ELU,  ActivationTag::GELU,
    ActivationTag::Swish, ActivationTag::Mish,      ActivationTag::GoLU, ActivationTag::FMish,
};

/// The seven activations compared in the benchmark tables (everything except FMish).
inline constexpr std::array<ActivationTag, 7> kComparedActivationTags = {
    ActivationTag::ReLU,  ActivationTag::LeakyReLU, ActivationTag::ELU,  ActivationTag::GELU,
    ActivationTag::Swish, ActivationTag::Mish,      ActivationTag::GoLU,
};

inline std::string_view activation_name(ActivationTag tag) {
    switch (tag) {
    case ActivationTag::ReLU: return "ReLU";
    case ActivationTag::LeakyReLU: return "LeakyReLU";
    case ActivationTag::ELU: return "ELU";
    case ActivationTag::GELU: return "GELU";
    case ActivationTag::Swish: return "Swish";
    case ActivationTag::Mish: return "Mish";
    case ActivationTag::GoLU: return "GoLU";
    case ActivationTag::FMish: return "FMish";
    }
    return "unknown";
}

inline std::string_view activation_name(const ActivationKind& kind) { return activation_name(kind.tag()); }

/// Case-insensitive lookup; accepts "leaky_relu" / "leakyrelu" and "silu" for Swish.
inline std::optional<ActivationKind> parse_activation(std::string_view name) {
    std::string key;
    for (char c : name) {
        if (c != '_' && c != '-') {
            key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (key == "silu") {
        return ActivationKind::swish();
    }
    for (ActivationTag tag : kAllActivationTags) {
        std::string canonical;
        for (char c : activation_name(tag)) {
            canonical.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
        if (canonical == key) {
            return ActivationKind::from_tag(tag);
        }
    }
    return std::nullopt;
}

/// True for the piecewise activations that have a kink at the origin.
inline constexpr bool has_kink(ActivationTag tag) {
    return tag == ActivationTag::ReLU || tag == ActivationTag::LeakyReLU || tag == ActivationTag::ELU;
}

/// x, f(x), f'(x), f''(x).
struct EvalPoint {
    double x;
    double value;
    double d1;
    double d2;
};

namespace act_detail {

// Unchecked per-activation closed forms. Kernels instantiate these directly so
// every execution path runs the same arithmetic.

template <ActivationTag Tag>
inline double forward(double x, const ActivationKind& kind);

template <ActivationTag Tag>
inline double derivative(double x, const ActivationKind& kind);

template <>
inline double forward<ActivationTag::ReLU>(double x, const ActivationKind&) {
    return x < 0.0 ? 0.0 : x;  // NaN passes through
}
template <>
inline double derivative<ActivationTag::ReLU>(double x, const ActivationKind&) {
    return x > 0.0 ? 1.0 : 0.0;
}

template <>
inline double forward<ActivationTag::LeakyReLU>(double x, const ActivationKind& kind) {
    return x > 0.0 ? x : kind.leaky_slope() * x;
}
template <>
inline double derivative<ActivationTag::LeakyReLU>(double x, const ActivationKind& kind) {
    return x > 0.0 ? 1.0 : kind.leaky_slope();
}

template <>
inline double forward<ActivationTag::ELU>(double x, const ActivationKind& kind) {
    return x > 0.0 ? x : kind.elu_alpha() * std::expm1(x);
}
// ELU'(0) is taken from the right: 1.
template <>
inline double derivative<ActivationTag::ELU>(double x, const ActivationKind& kind) {
    return x >= 0.0 ? 1.0 : kind.elu_alpha() * std::exp(x);
}

template <>
inline double forward<ActivationTag::GELU>(double x, const ActivationKind&) {
    return x * special::normal_cdf(x);
}
template <>
inline double derivative<ActivationTag::GELU>(double x, const ActivationKind&) {
    return special::normal_cdf(x) + x * special::normal_pdf(x);
}

template <>
inline double forward<ActivationTag::Swish>(double x, const ActivationKind&) {
    return x * special::sigmoid(x);
}
template <>
inline double derivative<ActivationTag::Swish>(double x, const ActivationKind&) {
    const double s = special::sigmoid(x);
    return s + x * s * special::sigmoid(-x);
}

template <>
inline double forward<ActivationTag::Mish>(double x, const ActivationKind&) {
    return x * gate_detail::mish_gate(x);
}
template <>
inline double derivative<ActivationTag::Mish>(double x, const ActivationKind&) {
    return gate_detail::mish_gate(x) + x * gate_detail::mish_density(x);
}

template <>
inline double forward<ActivationTag::GoLU>(double x, const ActivationKind&) {
    if (x < kGompertzCutoff) {
        return 0.0;
    }
    return x * std::exp(-std::exp(-x));
}
// GoLU'(x) = Gompertz(x) + x * Gompertz(x) * e^{-x}
template <>
inline double derivative<ActivationTag::GoLU>(double x, const ActivationKind&) {
    if (x < kGompertzCutoff) {
        return 0.0;
    }
    const double u = std::exp(-x);
    const double g = std::exp(-u);
    return g + x * g * u;
}

template <>
inline double forward<ActivationTag::FMish>(double x, const ActivationKind&) {
    return x * gate_detail::fmish_gate(x);
}
template <>
inline double derivative<ActivationTag::FMish>(double x, const ActivationKind&) {
    return gate_detail::fmish_gate(x) + x * gate_detail::fmish_density(x);
}

/// Calls fn.template operator()<Tag>() for the runtime tag.
template <typename Fn>
inline decltype(auto) dispatch(ActivationTag tag, Fn&& fn) {
    switch (tag) {
    case ActivationTag::ReLU: return fn.template operator()<ActivationTag::ReLU>();
    case ActivationTag::LeakyReLU: return fn.template operator()<ActivationTag::LeakyReLU>();
    case ActivationTag::ELU: return fn.template operator()<ActivationTag::ELU>();
    case ActivationTag::GELU: return fn.template operator()<ActivationTag::GELU>();
    case ActivationTag::Swish: return fn.template operator()<ActivationTag::Swish>();
    case ActivationTag::Mish: return fn.template operator()<ActivationTag::Mish>();
    case ActivationTag::GoLU: return fn.template operator()<ActivationTag::GoLU>();
    case ActivationTag::FMish: return fn.template operator()<ActivationTag::FMish>();
    }
    return fn.template operator()<ActivationTag::ReLU>();
}

inline double forward_any(const ActivationKind& kind, double x) {
    return dispatch(kind.tag(), [&]<ActivationTag T>() { return forward<T>(x, kind); });
}

inline double derivative_any(const ActivationKind& kind, double x) {
    return dispatch(kind.tag(), [&]<ActivationTag T>() { return derivative<T>(x, kind); });
}

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": input must be finite");
    }
}

} // namespace act_detail

inline double act_forward(const ActivationKind& kind, double x) {
    act_detail::require_finite(x, "act_forward");
    return act_detail::forward_any(kind, x);
}

/// First derivative in closed form. At the kink of ReLU / LeakyReLU / ELU the
/// one-sided conventions ReLU'(0) = 0, LeakyReLU'(0) = slope, ELU'(0) = 1 apply.
inline double act_derivative(const ActivationKind& kind, double x) {
    act_detail::require_finite(x, "act_derivative");
    return act_detail::derivative_any(kind, x);
}

/// Second derivative.
///
/// GoLU uses its closed form G(x) e^{-x} (2 + x e^{-x} - x), G = e^{-e^{-x}}.
/// The piecewise-linear/exponential kinds return their exact piecewise value and
/// throw at the kink. The remaining smooth kinds use a 5-point central difference
/// of the closed-form first derivative with step max(1e-4, 1e-4 |x|); its error
/// is around 1e-12 relative.
inline double act_second_derivative(const ActivationKind& kind, double x) {
    act_detail::require_finite(x, "act_second_derivative");
    switch (kind.tag()) {
    case ActivationTag::ReLU:
    case ActivationTag::LeakyReLU:
    case ActivationTag::ELU:
        if (x == 0.0) {
            throw UndefinedDerivativeError(std::string(activation_name(kind)) +
                                           ": second derivative undefined at the kink x = 0");
        }
        if (kind.tag() == ActivationTag::ELU && x < 0.0) {
            return kind.elu_alpha() * std::exp(x);
        }
        return 0.0;
    case ActivationTag::GoLU: {
        if (x < kGompertzCutoff) {
            return 0.0;
        }
        const double u = std::exp(-x);
        const double g = std::exp(-u);
        return g * u * (2.0 + x * u - x);
    }
    default: break;
    }
    const double h = std::max(1e-4, 1e-4 * std::fabs(x));
    const auto d = [&](double t) { return act_detail::derivative_any(kind, t); };
    return (-d(x + 2.0 * h) + 8.0 * d(x + h) - 8.0 * d(x - h) + d(x - 2.0 * h)) / (12.0 * h);
}

/// Throws UndefinedDerivativeError if kind has a kink exactly at x.
inline void require_differentiable(const ActivationKind& kind, double x) {
    if (has_kink(kind.tag()) && x == 0.0) {
        throw UndefinedDerivativeError(std::string(activation_name(kind)) + ": not differentiable at x = 0");
    }
}

inline EvalPoint evaluate(const ActivationKind& kind, double x) {
    return EvalPoint{x, act_forward(kind, x), act_derivative(kind, x), act_second_derivative(kind, x)};
}

} // namespace golu
