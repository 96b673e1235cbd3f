#pragma once

#include <golu/activation.hpp>
#include <golu/csv.hpp>
#include <golu/errors.hpp>
#include <golu/kernels.hpp>
#include <golu/rng.hpp>
#include <golu/tensor.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ostream>
#include <vector>

namespace golu {

struct BenchReport {
    ActivationKind kind;
    std::size_t n = 0;
    std::size_t reps = 0;
    ExecPath path = ExecPath::Parallel;
    double ns_per_elem = 0.0;
    double relative_to_relu = 0.0;
};

struct BenchConfig {
    std::size_t n = 10'000'000;
    std::size_t reps = 20;
    ExecPath path = ExecPath::Parallel;
    std::uint64_t seed = 1;
};

namespace bench_detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace bench_detail

/// Times apply_forward for each kind (ReLU is always measured as the baseline).
///
/// Every repetition runs all kinds round-robin so slow drift (thermal, frequency
/// scaling) hits each kind equally; one untimed warmup call per kind precedes
/// the timed runs. The reported time is the median over repetitions.
template <typename T = double>
std::vector<BenchReport> bench_kernels(const std::vector<ActivationKind>& kinds, const BenchConfig& cfg) {
    if (cfg.n < 1'000'000) {
        throw UsageError("bench: n must be at least 1e6");
    }
    if (cfg.reps < 10) {
        throw UsageError("bench: reps must be at least 10");
    }

    std::vector<ActivationKind> order{ActivationKind::relu()};
    for (const auto& k : kinds) {
        if (std::find(order.begin(), order.end(), k) == order.end()) {
            order.push_back(k);
        }
    }

    Rng rng(cfg.seed);
    std::vector<T> values(cfg.n);
    for (auto& v : values) {
        v = static_cast<T>(rng.normal(0.0, 3.0));
    }
    const Tensor<T> input(Shape{cfg.n}, std::move(values));

    using clock = std::chrono::steady_clock;
    std::vector<std::vector<double>> samples(order.size());
    double sink = 0.0;
    for (const auto& k : order) {
        sink += static_cast<double>(apply_forward(k, input, cfg.path)[0]);
    }
    for (std::size_t r = 0; r < cfg.reps; ++r) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            const auto t0 = clock::now();
            const Tensor<T> out = apply_forward(order[i], input, cfg.path);
            const auto t1 = clock::now();
            sink += static_cast<double>(out[cfg.n / 2]);
            samples[i].push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
        }
    }
    // Keeps the timed calls observable.
    if (sink == 0.123456789) {
        samples[0].push_back(0.0);
    }

    const double tick_ns = std::chrono::duration<double, std::nano>(clock::duration(1)).count();
    std::vector<double> medians;
    for (auto& s : samples) {
        const double m = bench_detail::median(s);
        if (m < 1000.0 * tick_ns) {
            throw MeasurementError("bench: median run shorter than 1000 timer ticks; increase n");
        }
        medians.push_back(m);
    }

    std::vector<BenchReport> reports;
    for (std::size_t i = 0; i < order.size(); ++i) {
        BenchReport r;
        r.kind = order[i];
        r.n = cfg.n;
        r.reps = cfg.reps;
        r.path = cfg.path;
        r.ns_per_elem = medians[i] / static_cast<double>(cfg.n);
        r.relative_to_relu = medians[i] / medians[0];
        reports.push_back(r);
    }
    return reports;
}

/// Single-kind convenience wrapper; the ReLU baseline is measured in the same process.
template <typename T = double>
BenchReport bench_kernel(const ActivationKind& kind, const BenchConfig& cfg) {
    const auto reports = bench_kernels<T>({kind}, cfg);
    for (const auto& r : reports) {
        if (r.kind == kind) {
            return r;
        }
    }
    return reports.front();
}

/// CSV with header kind,n,reps,path,ns_per_elem,relative_to_relu.
inline void write_bench_csv(std::ostream& os, const std::vector<BenchReport>& reports) {
    os << "kind,n,reps,path,ns_per_elem,relative_to_relu\n";
    for (const auto& r : reports) {
        os << activation_name(r.kind) << ',' << r.n << ',' << r.reps << ',' << path_name(r.path) << ','
           << csv::num(r.ns_per_elem) << ',' << csv::num(r.relative_to_relu) << '\n';
    }
}

} // namespace golu
