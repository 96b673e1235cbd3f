#pragma once

#include <golu/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace golu {

struct Histogram {
    std::vector<double> edges;        ///< bins + 1 ascending edges
    std::vector<std::size_t> counts;  ///< one count per bin

    std::size_t total() const {
        std::size_t t = 0;
        for (auto c : counts) {
            t += c;
        }
        return t;
    }
};

/// Equal-width histogram over [lo, hi]; values outside the range are dropped,
/// the right edge is inclusive. A degenerate range lo == hi is widened to
/// [lo - 0.5, lo + 0.5].
inline Histogram make_histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
    if (bins == 0) {
        throw UsageError("histogram: need at least one bin");
    }
    if (!(lo <= hi)) {
        throw UsageError("histogram: need lo <= hi");
    }
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    Histogram h;
    h.edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) {
        h.edges[i] = lo + width * static_cast<double>(i);
    }
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double v : values) {
        if (!(v >= lo && v <= hi)) {
            continue;
        }
        auto b = static_cast<std::size_t>((v - lo) / width);
        h.counts[std::min(b, bins - 1)] += 1;
    }
    return h;
}

/// Histogram spanning the sample range.
inline Histogram make_histogram(std::span<const double> values, std::size_t bins) {
    if (values.empty()) {
        return make_histogram(values, bins, 0.0, 0.0);
    }
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    return make_histogram(values, bins, *mn, *mx);
}

inline double mean_of(std::span<const double> v) {
    if (v.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

/// Population variance (divides by n), two-pass.
inline double population_variance(std::span<const double> v) {
    if (v.empty()) {
        return 0.0;
    }
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return s / static_cast<double>(v.size());
}

/// Linear-interpolation quantile of already sorted data (type 7).
inline double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw UsageError("quantile of empty sample");
    }
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = pos - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

inline double quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return sorted_quantile(values, p);
}

/// Closed interval [lo, hi].
struct Interval {
    double lo;
    double hi;

    bool contains(double x) const { return x >= lo && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Central interval holding `mass` of the sample, e.g. 0.98 -> [q_0.01, q_0.99].
inline Interval central_interval(std::vector<double> values, double mass = 0.98) {
    if (!(mass > 0.0 && mass <= 1.0)) {
        throw UsageError("central_interval: mass must lie in (0, 1]");
    }
    std::sort(values.begin(), values.end());
    const double tail = 0.5 * (1.0 - mass);
    return Interval{sorted_quantile(values, tail), sorted_quantile(values, 1.0 - tail)};
}

/// Intersection of intervals; throws if it is empty.
inline Interval intersect(std::span<const Interval> intervals) {
    if (intervals.empty()) {
        throw UsageError("intersect: no intervals");
    }
    Interval out = intervals.front();
    for (const auto& iv : intervals) {
        out.lo = std::max(out.lo, iv.lo);
        out.hi = std::min(out.hi, iv.hi);
    }
    if (out.lo > out.hi) {
        throw UsageError("intersect: intervals do not overlap");
    }
    return out;
}

} // namespace golu
