#pragma once

// Moments of f(x) for x ~ Normal(mu, sigma^2): the first-order delta law, its
// second-order mean correction, and two independent oracles (quadrature and
// Monte Carlo). Also the conv + batchnorm squeeze experiment.

#include <golu/activation.hpp>
#include <golu/csv.hpp>
#include <golu/errors.hpp>
#include <golu/kernels.hpp>
#include <golu/micronet.hpp>
#include <golu/quadrature.hpp>
#include <golu/rng.hpp>
#include <golu/stats.hpp>
#include <golu/tensor.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace golu {

enum class MomentMethod { Delta, Quadrature, MonteCarlo };

inline std::string_view method_name(MomentMethod m) {
    switch (m) {
    case MomentMethod::Delta: return "delta";
    case MomentMethod::Quadrature: return "quadrature";
    case MomentMethod::MonteCarlo: return "montecarlo";
    }
    return "unknown";
}

struct MomentEstimate {
    double mean = 0.0;
    double variance = 0.0;
    MomentMethod method = MomentMethod::Quadrature;
    std::size_t n_or_nodes = 0;
    std::optional<std::uint64_t> seed;
    double mean_se = 0.0;      ///< Monte-Carlo standard error of the mean, else 0
    double variance_se = 0.0;  ///< Monte-Carlo standard error of the variance, else 0
};

/// f'(mu)^2 sigma^2.
inline double delta_variance(const ActivationKind& kind, double mu, double sigma) {
    if (!(sigma >= 0.0)) {
        throw UsageError("delta_variance: sigma must be >= 0");
    }
    require_differentiable(kind, mu);
    const double d = act_derivative(kind, mu);
    return d * d * sigma * sigma;
}

/// f(mu) + f''(mu) sigma^2 / 2.
inline double delta_mean(const ActivationKind& kind, double mu, double sigma) {
    if (!(sigma >= 0.0)) {
        throw UsageError("delta_mean: sigma must be >= 0");
    }
    require_differentiable(kind, mu);
    if (sigma == 0.0) {
        return act_forward(kind, mu);
    }
    return act_forward(kind, mu) + 0.5 * act_second_derivative(kind, mu) * sigma * sigma;
}

namespace variance_detail {

// Quadrature nodes (in x) and normalized weights (summing to 1) for Normal(mu, sigma^2).
inline QuadratureRule normal_rule(const ActivationKind& kind, double mu, double sigma, std::size_t nodes) {
    QuadratureRule out;
    if (!has_kink(kind.tag())) {
        const QuadratureRule gh = gauss_hermite(nodes);
        out.nodes.resize(nodes);
        out.weights.resize(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            out.nodes[i] = mu + std::numbers::sqrt2 * sigma * gh.nodes[i];
            out.weights[i] = gh.weights[i] * std::numbers::inv_sqrtpi;
        }
        return out;
    }
    // Piecewise kinds: Gauss–Legendre on mu +- 12 sigma, split at the kink.
    const double lo = mu - 12.0 * sigma;
    const double hi = mu + 12.0 * sigma;
    std::vector<std::pair<double, double>> pieces;
    if (lo < 0.0 && hi > 0.0) {
        pieces = {{lo, 0.0}, {0.0, hi}};
    } else {
        pieces = {{lo, hi}};
    }
    for (const auto& [a, b] : pieces) {
        const QuadratureRule gl = gauss_legendre(nodes, a, b);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double z = (gl.nodes[i] - mu) / sigma;
            out.nodes.push_back(gl.nodes[i]);
            out.weights.push_back(gl.weights[i] * std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi)));
        }
    }
    return out;
}

inline std::pair<double, double> rule_moments(const ActivationKind& kind, const QuadratureRule& r) {
    std::vector<double> f(r.nodes.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = act_forward(kind, r.nodes[i]);
        mean += r.weights[i] * f[i];
    }
    double var = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        var += r.weights[i] * (f[i] - mean) * (f[i] - mean);
    }
    return {mean, var};
}

} // namespace variance_detail

/// E[f] and Var[f] by Gauss–Hermite (smooth kinds) or kink-split Gauss–Legendre
/// on mu +- 12 sigma (ReLU family), computed with `nodes` and 2 * `nodes` and
/// returned at the finer rule. Throws ResolutionError if the two rules differ
/// by more than 1e-8 in either moment.
inline MomentEstimate quadrature_moments(const ActivationKind& kind, double mu, double sigma,
                                         std::size_t nodes = 128) {
    if (nodes < 64) {
        throw UsageError("quadrature_moments: need at least 64 nodes");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
        throw UsageError("quadrature_moments: need finite mu and sigma > 0");
    }
    const auto [m1, v1] = variance_detail::rule_moments(kind, variance_detail::normal_rule(kind, mu, sigma, nodes));
    const auto [m2, v2] =
        variance_detail::rule_moments(kind, variance_detail::normal_rule(kind, mu, sigma, 2 * nodes));
    if (std::fabs(m1 - m2) > 1e-8 || std::fabs(v1 - v2) > 1e-8) {
        throw ResolutionError("quadrature_moments: " + std::to_string(nodes) + " and " +
                              std::to_string(2 * nodes) + " node rules disagree beyond 1e-8");
    }
    MomentEstimate e;
    e.mean = m2;
    e.variance = std::max(0.0, v2);
    e.method = MomentMethod::Quadrature;
    e.n_or_nodes = 2 * nodes;
    return e;
}

/// Sample mean and (n - 1)-normalized variance of f over n Box–Muller normals
/// drawn from Rng(seed). Standard errors use the sample fourth central moment.
inline MomentEstimate mc_moments(const ActivationKind& kind, double mu, double sigma, std::size_t n,
                                 std::uint64_t seed) {
    if (n < 10000) {
        throw UsageError("mc_moments: need n >= 1e4");
    }
    if (!(sigma >= 0.0)) {
        throw UsageError("mc_moments: sigma must be >= 0");
    }
    Rng rng(seed);
    Tensor<double> x(Shape{n});
    for (double& v : x.data()) {
        v = rng.normal(mu, sigma);
    }
    const Tensor<double> y = apply_forward(kind, x, ExecPath::Vector);
    const auto f = y.data();
    // Shifting by the first sample makes a constant sample give exactly zero variance.
    const double shift = f[0];
    double sum = 0.0;
    for (double v : f) {
        sum += v - shift;
    }
    const double mean = shift + sum / static_cast<double>(n);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : f) {
        const double d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    const double nd = static_cast<double>(n);
    MomentEstimate e;
    e.mean = mean;
    e.variance = m2 / (nd - 1.0);
    e.method = MomentMethod::MonteCarlo;
    e.n_or_nodes = n;
    e.seed = seed;
    const double pop_var = m2 / nd;
    e.mean_se = std::sqrt(e.variance / nd);
    e.variance_se = std::sqrt(std::max(0.0, m4 / nd - pop_var * pop_var) / nd);
    return e;
}

inline void write_moment_csv_header(std::ostream& os) { os << "kind,mu,sigma,method,mean,variance\n"; }

inline void write_moment_csv_row(std::ostream& os, const ActivationKind& kind, double mu, double sigma,
                                 const MomentEstimate& e) {
    os << activation_name(kind) << ',' << csv::num(mu) << ',' << csv::num(sigma) << ',' << method_name(e.method)
       << ',' << csv::num(e.mean) << ',' << csv::num(e.variance) << '\n';
}

// --- squeeze experiment ------------------------------------------------------

/// Synthetic [C, H, W] image: smooth random per-channel ramps plus pixel noise,
/// standardized per channel to mean 0 and variance 1.
inline Tensor<double> synthetic_image(std::size_t channels, std::size_t height, std::size_t width,
                                      std::uint64_t seed) {
    if (channels == 0 || height == 0 || width == 0) {
        throw UsageError("synthetic_image: empty image");
    }
    Rng rng(seed);
    Tensor<double> img(Shape{channels, height, width});
    auto d = img.data();
    const std::size_t plane = height * width;
    for (std::size_t c = 0; c < channels; ++c) {
        const double gx = rng.normal();
        const double gy = rng.normal();
        const double freq = rng.uniform(0.5, 3.0);
        double* p = d.data() + c * plane;
        for (std::size_t i = 0; i < height; ++i) {
            for (std::size_t j = 0; j < width; ++j) {
                const double u = static_cast<double>(i) / static_cast<double>(height);
                const double v = static_cast<double>(j) / static_cast<double>(width);
                p[i * width + j] = gx * u + gy * v + std::sin(freq * 2.0 * std::numbers::pi * (u + v)) + rng.normal();
            }
        }
        const std::span<const double> chan(p, plane);
        const double m = mean_of(chan);
        const double sd = std::sqrt(population_variance(chan));
        for (std::size_t k = 0; k < plane; ++k) {
            p[k] = sd > 0.0 ? (p[k] - m) / sd : 0.0;
        }
    }
    return img;
}

struct SqueezeRow {
    ActivationKind activation;
    double variance = 0.0;
};

struct SqueezeResult {
    double preactivation_variance = 0.0;
    /// The image, or some channel of the conv output, was constant; batchnorm
    /// then normalizes by sqrt(eps) alone.
    bool degenerate = false;
    std::vector<SqueezeRow> rows;
};

/// Conv3x3(C -> out_channels, Kaiming-uniform from `seed`) then train-mode
/// batchnorm on a batch of one image; every activation in `kinds` is applied to
/// the same normalized pre-activation and the population variance of its
/// output is reported.
inline SqueezeResult squeeze_experiment(const Tensor<double>& image, std::size_t out_channels, std::uint64_t seed,
                                        const std::vector<ActivationKind>& kinds) {
    if (image.rank() != 3) {
        throw UsageError("squeeze_experiment: image must be [C, H, W]");
    }
    const std::size_t c = image.extent(0);
    const std::size_t h = image.extent(1);
    const std::size_t w = image.extent(2);
    if (h < 8 || w < 8) {
        throw UsageError("squeeze_experiment: need H, W >= 8");
    }
    if (out_channels == 0) {
        throw UsageError("squeeze_experiment: need at least one output channel");
    }
    MicroNet net({Conv3x3Spec{c, out_channels}, BatchNormSpec{out_channels}}, Shape{c, h, w});
    net.init(seed);
    net.set_mode(Mode::Train);
    const Tensor<double> pre = net.forward(image.reshaped(Shape{1, c, h, w}));

    SqueezeResult res;
    res.preactivation_variance = population_variance(pre.data());
    const auto [lo, hi] = std::minmax_element(image.data().begin(), image.data().end());
    res.degenerate = *lo == *hi;
    const std::size_t plane = h * w;
    for (std::size_t k = 0; k < out_channels; ++k) {
        const std::span<const double> chan = pre.data().subspan(k * plane, plane);
        const auto [mn, mx] = std::minmax_element(chan.begin(), chan.end());
        if (*mn == *mx) {
            res.degenerate = true;
        }
    }
    for (const auto& kind : kinds) {
        const Tensor<double> y = apply_forward(kind, pre, ExecPath::Vector);
        res.rows.push_back(SqueezeRow{kind, population_variance(y.data())});
    }
    return res;
}

inline std::vector<ActivationKind> compared_activations() {
    std::vector<ActivationKind> out;
    for (ActivationTag t : kComparedActivationTags) {
        out.push_back(ActivationKind::from_tag(t));
    }
    return out;
}

inline std::vector<ActivationKind> all_activations() {
    std::vector<ActivationKind> out;
    for (ActivationTag t : kAllActivationTags) {
        out.push_back(ActivationKind::from_tag(t));
    }
    return out;
}

/// Histogram of f over the samples (range taken from the outputs).
inline Histogram output_density(const ActivationKind& kind, const Tensor<double>& samples, std::size_t bins) {
    if (bins < 50) {
        throw UsageError("output_density: need at least 50 bins");
    }
    const Tensor<double> y = apply_forward(kind, samples, ExecPath::Vector);
    return make_histogram(y.data(), bins);
}

inline void write_histogram_csv(std::ostream& os, const Histogram& h) {
    os << "bin_lo,bin_hi,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        os << csv::num(h.edges[i]) << ',' << csv::num(h.edges[i + 1]) << ',' << h.counts[i] << '\n';
    }
}

} // namespace golu
