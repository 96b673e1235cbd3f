#pragma once

// Elementwise activation kernels over tensors.
//
// Three execution paths compute out[i] = f(x[i]) with identical per-element
// arithmetic, so their results agree bit for bit:
//   Scalar   - one element at a time through the runtime-dispatched closed form.
//   Vector   - the activation is resolved once, then elements are processed in
//              fixed-width lane blocks with full-precision libm exp.
//   Parallel - the buffer is cut into contiguous chunks of at least 64 KiB, one
//              per worker, each running the vector path.
// Single-precision tensors are widened to double per element and rounded back.
// Non-finite inputs are not rejected; they propagate per IEEE-754.

#include <golu/activation.hpp>
#include <golu/errors.hpp>
#include <golu/tensor.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace golu {

enum class ExecPath { Scalar, Vector, Parallel };

inline std::string_view path_name(ExecPath p) {
    switch (p) {
    case ExecPath::Scalar: return "scalar";
    case ExecPath::Vector: return "vector";
    case ExecPath::Parallel: return "parallel";
    }
    return "unknown";
}

inline std::optional<ExecPath> parse_path(std::string_view s) {
    for (ExecPath p : {ExecPath::Scalar, ExecPath::Vector, ExecPath::Parallel}) {
        if (path_name(p) == s) {
            return p;
        }
    }
    return std::nullopt;
}

/// Worker count: hardware parallelism, capped by the GOLU_LAB_THREADS
/// environment variable when it holds a positive integer.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GOLU_LAB_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) {
            n = std::min(n, static_cast<unsigned>(cap));
        }
    }
    return n;
}

/// Runs fn(begin, end) over [0, n) split into contiguous chunks of at least
/// min_chunk elements, one chunk per worker. Runs inline when one chunk suffices.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t min_chunk, Fn&& fn) {
    const std::size_t max_workers = std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk));
    const std::size_t workers = std::min<std::size_t>(worker_count(), max_workers);
    if (workers <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b < e) {
            pool.emplace_back([&fn, b, e] { fn(b, e); });
        }
    }
    fn(std::size_t{0}, std::min(n, chunk));
}

namespace kernel_detail {

inline constexpr std::size_t kLanes = 8;
inline constexpr std::size_t kChunkBytes = 64 * 1024;

template <typename T, typename Op>
void map_lanes(std::span<const T> in, std::span<T> out, Op op) {
    const std::size_t n = in.size();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        std::array<double, kLanes> lane;
        for (std::size_t l = 0; l < kLanes; ++l) {
            lane[l] = static_cast<double>(in[i + l]);
        }
        for (std::size_t l = 0; l < kLanes; ++l) {
            lane[l] = op(lane[l]);
        }
        for (std::size_t l = 0; l < kLanes; ++l) {
            out[i + l] = static_cast<T>(lane[l]);
        }
    }
    for (; i < n; ++i) {
        out[i] = static_cast<T>(op(static_cast<double>(in[i])));
    }
}

template <typename T, typename Op>
void map_lanes2(std::span<const T> a, std::span<const T> b, std::span<T> out, Op op) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        std::array<double, kLanes> lane;
        for (std::size_t l = 0; l < kLanes; ++l) {
            lane[l] = op(static_cast<double>(a[i + l]), static_cast<double>(b[i + l]));
        }
        for (std::size_t l = 0; l < kLanes; ++l) {
            out[i + l] = static_cast<T>(lane[l]);
        }
    }
    for (; i < n; ++i) {
        out[i] = static_cast<T>(op(static_cast<double>(a[i]), static_cast<double>(b[i])));
    }
}

template <typename T>
void forward_vector(const ActivationKind& kind, std::span<const T> in, std::span<T> out) {
    act_detail::dispatch(kind.tag(), [&]<ActivationTag Tag>() {
        map_lanes(in, out, [&kind](double x) { return act_detail::forward<Tag>(x, kind); });
    });
}

template <typename T>
void backward_vector(const ActivationKind& kind, std::span<const T> x, std::span<const T> up, std::span<T> out) {
    act_detail::dispatch(kind.tag(), [&]<ActivationTag Tag>() {
        map_lanes2(x, up, out,
                   [&kind](double xi, double gi) { return act_detail::derivative<Tag>(xi, kind) * gi; });
    });
}

} // namespace kernel_detail

/// out[i] = f(x[i]); output is freshly allocated with x's shape.
template <typename T>
Tensor<T> apply_forward(const ActivationKind& kind, const Tensor<T>& x, ExecPath path = ExecPath::Parallel) {
    Tensor<T> out(x.shape());
    std::span<const T> in = x.data();
    std::span<T> dst = out.data();
    switch (path) {
    case ExecPath::Scalar:
        for (std::size_t i = 0; i < in.size(); ++i) {
            dst[i] = static_cast<T>(act_detail::forward_any(kind, static_cast<double>(in[i])));
        }
        break;
    case ExecPath::Vector: kernel_detail::forward_vector(kind, in, dst); break;
    case ExecPath::Parallel:
        parallel_chunks(in.size(), kernel_detail::kChunkBytes / sizeof(T), [&](std::size_t b, std::size_t e) {
            kernel_detail::forward_vector(kind, in.subspan(b, e - b), dst.subspan(b, e - b));
        });
        break;
    }
    return out;
}

/// out[i] = f'(x[i]) * upstream[i].
template <typename T>
Tensor<T> apply_backward(const ActivationKind& kind, const Tensor<T>& x, const Tensor<T>& upstream,
                         ExecPath path = ExecPath::Parallel) {
    if (x.shape() != upstream.shape()) {
        throw UsageError("apply_backward: input shape " + shape_string(x.shape()) + " != upstream shape " +
                         shape_string(upstream.shape()));
    }
    Tensor<T> out(x.shape());
    std::span<const T> in = x.data();
    std::span<const T> up = upstream.data();
    std::span<T> dst = out.data();
    switch (path) {
    case ExecPath::Scalar:
        for (std::size_t i = 0; i < in.size(); ++i) {
            dst[i] = static_cast<T>(act_detail::derivative_any(kind, static_cast<double>(in[i])) *
                                    static_cast<double>(up[i]));
        }
        break;
    case ExecPath::Vector: kernel_detail::backward_vector(kind, in, up, dst); break;
    case ExecPath::Parallel:
        parallel_chunks(in.size(), kernel_detail::kChunkBytes / sizeof(T), [&](std::size_t b, std::size_t e) {
            kernel_detail::backward_vector(kind, in.subspan(b, e - b), up.subspan(b, e - b), dst.subspan(b, e - b));
        });
        break;
    }
    return out;
}

} // namespace golu
