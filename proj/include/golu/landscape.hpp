#pragma once

// Loss landscape around trained weights: L(W + alpha d1 + beta d2) over a grid.

#include <golu/csv.hpp>
#include <golu/datasets.hpp>
#include <golu/errors.hpp>
#include <golu/kernels.hpp>
#include <golu/micronet.hpp>
#include <golu/rng.hpp>
#include <golu/train.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

namespace golu {

struct Directions {
    std::vector<double> d1;
    std::vector<double> d2;
    std::uint64_t seed = 0;
};

namespace landscape_detail {

inline std::vector<double> unit_normal_vector(std::size_t dim, Rng rng) {
    std::vector<double> v(dim);
    double ss = 0.0;
    for (double& x : v) {
        x = rng.normal();
        ss += x * x;
    }
    const double norm = std::sqrt(ss);
    for (double& x : v) {
        x /= norm;
    }
    return v;
}

} // namespace landscape_detail

/// Two standard-normal directions of length `dim`, each scaled to unit global
/// L2 norm; d1 comes from stream 0 of `seed` and d2 from stream 1.
inline Directions sample_directions(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) {
        throw UsageError("sample_directions: empty parameter layout");
    }
    return Directions{landscape_detail::unit_normal_vector(dim, Rng::stream(seed, 0)),
                      landscape_detail::unit_normal_vector(dim, Rng::stream(seed, 1)), seed};
}

inline Directions swapped(const Directions& d) { return Directions{d.d2, d.d1, d.seed}; }

struct LossSurface {
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<std::vector<double>> losses;  ///< losses[i][j] at (alphas[i], betas[j])
    double base_loss = 0.0;
    std::size_t nan_cells = 0;
};

/// n equally spaced coefficients r * (2i - (n - 1)) / (n - 1); the middle one is
/// exactly 0. n == 1 gives {0}.
inline std::vector<double> coefficient_grid(std::size_t n, double radius) {
    if (n == 0 || n % 2 == 0) {
        throw UsageError("coefficient_grid: grid size must be odd");
    }
    std::vector<double> g(n, 0.0);
    if (n == 1) {
        return g;
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = 2.0 * static_cast<double>(i) - denom;
        g[i] = radius * (k / denom);
    }
    return g;
}

/// Mean test cross-entropy at W + (alpha d1 + beta d2) for every grid cell,
/// with batchnorm running statistics frozen (eval mode). `net` is not
/// modified; cells are evaluated on per-worker copies. Non-finite cell losses
/// are stored as NaN and counted in nan_cells.
inline LossSurface loss_surface(const MicroNet& net, const Dataset& test, const Directions& dirs,
                                std::size_t grid_n = 41, double radius = 1.0) {
    if (dirs.d1.size() != net.param_count() || dirs.d2.size() != net.param_count()) {
        throw UsageError("loss_surface: direction length does not match the parameter count");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw UsageError("loss_surface: radius must be positive");
    }
    LossSurface s;
    s.alphas = coefficient_grid(grid_n, radius);
    s.betas = s.alphas;
    s.losses.assign(grid_n, std::vector<double>(grid_n, 0.0));
    s.base_loss = dataset_loss(net, test);

    const std::vector<double>& w0 = net.params();
    const std::size_t cells = grid_n * grid_n;
    parallel_chunks(cells, 1, [&](std::size_t begin, std::size_t end) {
        MicroNet local = net;
        local.set_mode(Mode::Eval);
        std::vector<double>& w = local.params();
        for (std::size_t c = begin; c < end; ++c) {
            const std::size_t i = c / grid_n;
            const std::size_t j = c % grid_n;
            const double a = s.alphas[i];
            const double b = s.betas[j];
            for (std::size_t k = 0; k < w.size(); ++k) {
                w[k] = w0[k] + (a * dirs.d1[k] + b * dirs.d2[k]);
            }
            const double loss = dataset_loss(local, test);
            s.losses[i][j] = std::isfinite(loss) ? loss : std::numeric_limits<double>::quiet_NaN();
        }
    });
    for (const auto& row : s.losses) {
        for (double v : row) {
            s.nan_cells += std::isnan(v) ? 1 : 0;
        }
    }
    return s;
}

struct SurfaceStats {
    double mean = 0.0;
    double variance = 0.0;  ///< population variance over the finite cells
    double max = 0.0;
    double min = 0.0;
    double argmin_alpha = 0.0;
    double argmin_beta = 0.0;
    std::size_t argmin_i = 0;
    std::size_t argmin_j = 0;
    std::size_t cells = 0;
};

/// Statistics over the non-NaN cells; DegenerateSurfaceError when more than 5%
/// of the cells are NaN.
inline SurfaceStats surface_stats(const LossSurface& s) {
    std::size_t total = 0;
    std::size_t nan = 0;
    SurfaceStats st;
    double sum = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < s.losses.size(); ++i) {
        for (std::size_t j = 0; j < s.losses[i].size(); ++j) {
            const double v = s.losses[i][j];
            ++total;
            if (std::isnan(v)) {
                ++nan;
                continue;
            }
            sum += v;
            ++st.cells;
            if (first || v > st.max) {
                st.max = v;
            }
            if (first || v < st.min) {
                st.min = v;
                st.argmin_i = i;
                st.argmin_j = j;
            }
            first = false;
        }
    }
    if (total == 0 || st.cells == 0 || static_cast<double>(nan) > 0.05 * static_cast<double>(total)) {
        throw DegenerateSurfaceError("surface_stats: " + std::to_string(nan) + " of " + std::to_string(total) +
                                     " cells are NaN");
    }
    st.mean = sum / static_cast<double>(st.cells);
    double ss = 0.0;
    for (const auto& row : s.losses) {
        for (double v : row) {
            if (!std::isnan(v)) {
                ss += (v - st.mean) * (v - st.mean);
            }
        }
    }
    st.variance = ss / static_cast<double>(st.cells);
    if (!s.alphas.empty()) {
        st.argmin_alpha = s.alphas[st.argmin_i];
    }
    if (!s.betas.empty()) {
        st.argmin_beta = s.betas[st.argmin_j];
    }
    return st;
}

inline void write_surface_csv(std::ostream& os, const LossSurface& s) {
    os << "alpha,beta,loss\n";
    for (std::size_t i = 0; i < s.alphas.size(); ++i) {
        for (std::size_t j = 0; j < s.betas.size(); ++j) {
            os << csv::num(s.alphas[i]) << ',' << csv::num(s.betas[j]) << ',' << csv::num(s.losses[i][j]) << '\n';
        }
    }
}

} // namespace golu
