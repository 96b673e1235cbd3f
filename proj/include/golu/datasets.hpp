#pragma once

// Synthetic two-class point sets (two interleaved moons, concentric rings).

#include <golu/errors.hpp>
#include <golu/rng.hpp>
#include <golu/tensor.hpp>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace golu {

struct Dataset {
    Tensor<double> x;     ///< [N, features...]
    std::vector<int> y;   ///< class label per row
    std::size_t classes = 0;

    std::size_t size() const { return y.size(); }

    /// Rows `indices` in the given order.
    Dataset subset(std::span<const std::size_t> indices) const {
        const std::size_t row = x.size() / std::max<std::size_t>(1, size());
        Shape shape = x.shape();
        shape[0] = indices.size();
        std::vector<double> data;
        data.reserve(indices.size() * row);
        std::vector<int> labels;
        labels.reserve(indices.size());
        for (std::size_t idx : indices) {
            const auto src = x.data().subspan(idx * row, row);
            data.insert(data.end(), src.begin(), src.end());
            labels.push_back(y[idx]);
        }
        return Dataset{Tensor<double>(std::move(shape), std::move(data)), std::move(labels), classes};
    }
};

enum class TaskKind { Moons, Rings };

inline std::optional<TaskKind> parse_task(std::string_view s) {
    if (s == "moons" || s == "two_moons") {
        return TaskKind::Moons;
    }
    if (s == "rings" || s == "circles") {
        return TaskKind::Rings;
    }
    return std::nullopt;
}

inline std::string_view task_name(TaskKind t) { return t == TaskKind::Moons ? "moons" : "rings"; }

/// Two interleaving half circles: the outer arc (label 0) over angles
/// linspace(0, pi, n/2) and the inner arc (label 1) shifted to (1 - cos, 0.5 - sin),
/// plus isotropic Gaussian noise of standard deviation `noise`.
inline Dataset two_moons(std::size_t n, double noise, Rng& rng) {
    if (n < 4) {
        throw UsageError("two_moons: need at least 4 points");
    }
    const std::size_t n_out = n / 2;
    const std::size_t n_in = n - n_out;
    std::vector<double> data;
    data.reserve(2 * n);
    std::vector<int> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_out - 1);
        data.push_back(std::cos(t));
        data.push_back(std::sin(t));
        labels.push_back(0);
    }
    for (std::size_t i = 0; i < n_in; ++i) {
        const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_in - 1);
        data.push_back(1.0 - std::cos(t));
        data.push_back(0.5 - std::sin(t));
        labels.push_back(1);
    }
    for (double& v : data) {
        v += noise * rng.normal();
    }
    return Dataset{Tensor<double>(Shape{n, 2}, std::move(data)), std::move(labels), 2};
}

/// Two concentric circles: radius 1 (label 0) and radius `factor` (label 1).
inline Dataset rings(std::size_t n, double noise, Rng& rng, double factor = 0.5) {
    if (n < 4) {
        throw UsageError("rings: need at least 4 points");
    }
    const std::size_t n_out = n / 2;
    const std::size_t n_in = n - n_out;
    std::vector<double> data;
    data.reserve(2 * n);
    std::vector<int> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_out);
        data.push_back(std::cos(t));
        data.push_back(std::sin(t));
        labels.push_back(0);
    }
    for (std::size_t i = 0; i < n_in; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_in);
        data.push_back(factor * std::cos(t));
        data.push_back(factor * std::sin(t));
        labels.push_back(1);
    }
    for (double& v : data) {
        v += noise * rng.normal();
    }
    return Dataset{Tensor<double>(Shape{n, 2}, std::move(data)), std::move(labels), 2};
}

inline Dataset make_task(TaskKind task, std::size_t n, double noise, Rng& rng) {
    return task == TaskKind::Moons ? two_moons(n, noise, rng) : rings(n, noise, rng);
}

} // namespace golu
