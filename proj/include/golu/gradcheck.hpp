#pragma once

#include <golu/errors.hpp>
#include <golu/micronet.hpp>
#include <golu/rng.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace golu {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::size_t worst_index = 0;
    std::size_t checked = 0;
    /// Parameters whose +-eps perturbation moved some kinked-activation input
    /// across its kink (the one-sided derivative is then not comparable).
    std::size_t skipped_near_kink = 0;
};

/// Denominator floor of the relative error |a - n| / max(|a|, |n|, floor).
/// Gradients smaller than this are compared in absolute terms.
inline constexpr double kGradCheckFloor = 1e-4;

namespace gradcheck_detail {

// Sign pattern (-1, 0, +1) of every input to a kinked activation layer.
inline std::vector<signed char> kink_signature(const MicroNet& net, const Tensor<double>& batch) {
    std::vector<signed char> sig;
    const auto& layers = net.layers();
    // Parameters are laid out layer by layer, so a prefix network can copy the
    // leading slice of the full parameter and buffer vectors.
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (const auto* act = std::get_if<ActSpec>(&layers[i]); act != nullptr && has_kink(act->kind.tag())) {
            Tensor<double> pre = batch;
            if (i > 0) {
                std::vector<LayerSpec> prefix(layers.begin(), layers.begin() + static_cast<std::ptrdiff_t>(i));
                MicroNet head(prefix, net.sample_shape());
                std::copy_n(net.params().begin(), head.param_count(), head.params().begin());
                std::copy_n(net.buffers().begin(), head.buffers().size(), head.buffers().begin());
                head.set_mode(net.mode());
                pre = head.forward(batch);
            }
            for (double v : pre.data()) {
                sig.push_back(static_cast<signed char>((v > 0.0) - (v < 0.0)));
            }
        }
    }
    return sig;
}

inline bool has_kinked_layer(const MicroNet& net) {
    for (const auto& l : net.layers()) {
        if (const auto* act = std::get_if<ActSpec>(&l); act != nullptr && has_kink(act->kind.tag())) {
            return true;
        }
    }
    return false;
}

} // namespace gradcheck_detail

/// Compares backward() gradients of the mean softmax cross-entropy against
/// central differences (L(w + eps) - L(w - eps)) / (2 eps) in the network's
/// current mode.
///
/// Checks every parameter when `max_params` is 0 or at least the parameter
/// count, otherwise a uniformly drawn subset of `max_params` (>= 500 advised)
/// selected with `seed`. Parameters and batchnorm running statistics are
/// restored before returning.
inline GradCheckReport grad_check(MicroNet& net, const Tensor<double>& batch, std::span<const int> labels,
                                  double eps = 1e-5, std::size_t max_params = 0, std::uint64_t seed = 0) {
    if (!(eps >= 1e-7 && eps <= 1e-4)) {
        throw UsageError("grad_check: eps must lie in [1e-7, 1e-4]");
    }
    const std::vector<double> saved_params = net.params();
    const std::vector<double> saved_buffers = net.buffers();

    const auto loss_at = [&]() {
        const double l = softmax_cross_entropy(net.forward(batch), labels).loss;
        net.buffers() = saved_buffers;
        return l;
    };

    const LossResult base = softmax_cross_entropy(net.forward(batch), labels);
    net.backward(base.grad);
    const std::vector<double> analytic = net.grads();
    net.buffers() = saved_buffers;

    std::vector<std::size_t> indices(net.param_count());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    if (max_params != 0 && max_params < indices.size()) {
        Rng rng(seed);
        rng.shuffle(indices);
        indices.resize(max_params);
        std::sort(indices.begin(), indices.end());
    }

    const bool kinked = gradcheck_detail::has_kinked_layer(net);
    const std::vector<signed char> base_sig = kinked ? gradcheck_detail::kink_signature(net, batch)
                                                     : std::vector<signed char>{};

    GradCheckReport report;
    auto& w = net.params();
    for (std::size_t idx : indices) {
        const double orig = w[idx];
        w[idx] = orig + eps;
        const double lp = loss_at();
        const bool cross_p = kinked && gradcheck_detail::kink_signature(net, batch) != base_sig;
        w[idx] = orig - eps;
        const double lm = loss_at();
        const bool cross_m = kinked && gradcheck_detail::kink_signature(net, batch) != base_sig;
        w[idx] = orig;
        if (cross_p || cross_m) {
            ++report.skipped_near_kink;
            continue;
        }
        const double numeric = (lp - lm) / (2.0 * eps);
        const double a = analytic[idx];
        const double denom = std::max({std::fabs(a), std::fabs(numeric), kGradCheckFloor});
        const double rel = std::fabs(a - numeric) / denom;
        ++report.checked;
        if (rel > report.max_rel_err || std::isnan(rel)) {
            report.max_rel_err = rel;
            report.worst_index = idx;
        }
    }
    net.params() = saved_params;
    net.buffers() = saved_buffers;
    return report;
}

} // namespace golu
