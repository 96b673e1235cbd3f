#pragma once

// Spread of the trained weights, excluding batchnorm scale/shift.

#include <golu/errors.hpp>
#include <golu/micronet.hpp>
#include <golu/stats.hpp>

#include <optional>
#include <vector>

namespace golu {

struct WeightStats {
    Histogram histogram;          ///< over the dense/conv weights (and biases)
    Interval interval{0.0, 0.0};  ///< interval the bulk variance was restricted to
    double bulk_variance = 0.0;   ///< population variance of the weights inside `interval`
    std::size_t included = 0;     ///< weights counted by the histogram
    std::size_t bulk_count = 0;   ///< weights inside `interval`
};

/// Every parameter of the network that is not a batchnorm scale or shift.
inline std::vector<double> non_normalization_weights(const MicroNet& net) {
    std::vector<double> out;
    for (const auto& g : net.groups()) {
        if (g.is_normalization()) {
            continue;
        }
        const auto first = net.params().begin() + static_cast<std::ptrdiff_t>(g.offset);
        out.insert(out.end(), first, first + static_cast<std::ptrdiff_t>(g.size));
    }
    return out;
}

/// Population variance of the values lying inside `iv`.
inline double clipped_variance(std::span<const double> values, const Interval& iv, std::size_t* count = nullptr) {
    std::vector<double> kept;
    for (double v : values) {
        if (iv.contains(v)) {
            kept.push_back(v);
        }
    }
    if (count != nullptr) {
        *count = kept.size();
    }
    return population_variance(kept);
}

/// Histogram over the sample range and the variance restricted to `clip`
/// (default: the full range, i.e. no clipping).
inline WeightStats weight_stats(std::span<const double> weights, std::size_t bins,
                                std::optional<Interval> clip = std::nullopt) {
    if (bins < 20) {
        throw UsageError("weight_stats: need at least 20 bins");
    }
    if (weights.empty()) {
        throw UsageError("weight_stats: the network has no non-normalization parameters");
    }
    WeightStats s;
    s.histogram = make_histogram(weights, bins);
    s.included = s.histogram.total();
    const auto [mn, mx] = std::minmax_element(weights.begin(), weights.end());
    s.interval = clip.value_or(Interval{*mn, *mx});
    s.bulk_variance = clipped_variance(weights, s.interval, &s.bulk_count);
    return s;
}

inline WeightStats weight_stats(const MicroNet& net, std::size_t bins, std::optional<Interval> clip = std::nullopt) {
    return weight_stats(non_normalization_weights(net), bins, clip);
}

/// Clipping interval for comparing several networks: the intersection of each
/// network's central 98% interval.
inline Interval common_bulk_interval(const std::vector<std::vector<double>>& weight_sets, double mass = 0.98) {
    std::vector<Interval> ivs;
    ivs.reserve(weight_sets.size());
    for (const auto& w : weight_sets) {
        if (w.empty()) {
            throw UsageError("common_bulk_interval: empty weight set");
        }
        ivs.push_back(central_interval(w, mass));
    }
    return intersect(ivs);
}

} // namespace golu
