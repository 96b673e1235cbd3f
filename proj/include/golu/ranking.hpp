#pragma once

// Mean ranks, Friedman statistic and Nemenyi critical difference over a table
// of scores (rows: datasets/architectures, columns: methods).

#include <golu/csv.hpp>
#include <golu/errors.hpp>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <string>
#include <vector>

namespace golu {

struct ScoreMatrix {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    std::vector<std::vector<double>> scores;  ///< scores[row][col]
    bool higher_is_better = true;

    std::size_t n() const noexcept { return rows.size(); }
    std::size_t k() const noexcept { return cols.size(); }

    void validate() const {
        if (rows.size() < 2 || cols.size() < 2) {
            throw DataError("score matrix needs at least 2 rows and 2 columns");
        }
        if (scores.size() != rows.size()) {
            throw DataError("score matrix: row label count does not match the data");
        }
        for (std::size_t r = 0; r < scores.size(); ++r) {
            if (scores[r].size() != cols.size()) {
                throw DataError("score matrix: row '" + rows[r] + "' has " + std::to_string(scores[r].size()) +
                                " cells, expected " + std::to_string(cols.size()));
            }
            for (double v : scores[r]) {
                if (std::isnan(v)) {
                    throw DataError("score matrix: missing or NaN score in row '" + rows[r] + "'");
                }
            }
        }
    }
};

/// Header row "label,<method>,<method>,...", then one labeled row per dataset.
/// Blank lines and '#' comment lines are ignored.
inline ScoreMatrix read_score_csv(std::istream& is, bool higher_is_better) {
    const auto table = csv::read_rows(is);
    if (table.empty()) {
        throw DataError("score CSV is empty");
    }
    ScoreMatrix m;
    m.higher_is_better = higher_is_better;
    m.cols.assign(table.front().begin() + 1, table.front().end());
    for (std::size_t r = 1; r < table.size(); ++r) {
        const auto& row = table[r];
        if (row.size() != m.cols.size() + 1) {
            throw DataError("score CSV line " + std::to_string(r + 1) + ": expected " +
                            std::to_string(m.cols.size() + 1) + " fields, got " + std::to_string(row.size()));
        }
        m.rows.push_back(row.front());
        std::vector<double> vals;
        for (std::size_t c = 1; c < row.size(); ++c) {
            if (row[c].empty()) {
                throw DataError("score CSV: empty cell in row '" + row.front() + "'");
            }
            vals.push_back(csv::parse_double(row[c]));
        }
        m.scores.push_back(std::move(vals));
    }
    m.validate();
    return m;
}

/// Ranks within one row (1 = best), ties receiving the average of the ranks they span.
inline std::vector<double> rank_row(const std::vector<double>& row, bool higher_is_better) {
    const std::size_t k = row.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return higher_is_better ? row[a] > row[b] : row[a] < row[b];
    });
    std::vector<double> ranks(k);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j + 1 < k && row[order[j + 1]] == row[order[i]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            ranks[order[t]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

inline std::vector<double> mean_ranks(const ScoreMatrix& m) {
    m.validate();
    std::vector<double> sums(m.k(), 0.0);
    for (const auto& row : m.scores) {
        const auto r = rank_row(row, m.higher_is_better);
        for (std::size_t c = 0; c < m.k(); ++c) {
            sums[c] += r[c];
        }
    }
    for (double& s : sums) {
        s /= static_cast<double>(m.n());
    }
    return sums;
}

/// chi2_F = 12 N / (k (k + 1)) * (sum_j R_j^2 - k (k + 1)^2 / 4).
inline double friedman_statistic(const std::vector<double>& mean_ranks, std::size_t n, std::size_t k) {
    if (n < 2 || k < 2) {
        throw UsageError("friedman_statistic: need N >= 2 and k >= 2");
    }
    if (mean_ranks.size() != k) {
        throw UsageError("friedman_statistic: mean rank count differs from k");
    }
    const double kd = static_cast<double>(k);
    double ss = 0.0;
    for (double r : mean_ranks) {
        ss += r * r;
    }
    return 12.0 * static_cast<double>(n) / (kd * (kd + 1.0)) * (ss - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
}

/// Upper-tail probability of chi2_F under chi-squared with k - 1 degrees of freedom.
inline double friedman_p_value(double chi2, std::size_t k) {
    const boost::math::chi_squared dist(static_cast<double>(k - 1));
    return boost::math::cdf(boost::math::complement(dist, std::max(0.0, chi2)));
}

/// Two-tailed Nemenyi q_alpha for k = 2..10 (Demšar 2006, Table 5a): studentized
/// range quantiles divided by sqrt(2).
inline constexpr std::array<double, 9> kNemenyiQ05{1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
inline constexpr std::array<double, 9> kNemenyiQ10{1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};

inline double nemenyi_q(std::size_t k, double alpha) {
    if (k < 2 || k > 10) {
        throw RangeError("nemenyi: q is tabulated only for 2 <= k <= 10, got k = " + std::to_string(k));
    }
    if (alpha == 0.05) {
        return kNemenyiQ05[k - 2];
    }
    if (alpha == 0.10 || alpha == 0.1) {
        return kNemenyiQ10[k - 2];
    }
    throw RangeError("nemenyi: q is tabulated only for alpha 0.05 and 0.10");
}

/// CD = q_alpha(k) sqrt(k (k + 1) / (6 N)).
inline double nemenyi_cd(std::size_t k, std::size_t n, double alpha) {
    if (n == 0) {
        throw UsageError("nemenyi_cd: N must be positive");
    }
    const double kd = static_cast<double>(k);
    return nemenyi_q(k, alpha) * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n)));
}

struct CDResult {
    std::vector<std::string> names;
    std::vector<double> mean_ranks;
    double friedman_chi2 = 0.0;
    double friedman_p = 1.0;
    double cd = 0.0;
    double alpha = 0.05;
    std::size_t n = 0;
    /// Maximal sets of methods (column indices, ascending by mean rank) whose
    /// mean ranks all lie within less than cd of each other.
    std::vector<std::vector<std::size_t>> groups;
};

/// Cliques of the CD diagram: for each method in mean-rank order, the run of
/// following methods within cd; runs contained in an earlier run are dropped.
inline std::vector<std::vector<std::size_t>> cd_groups(const std::vector<double>& ranks, double cd) {
    std::vector<std::size_t> order(ranks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
    std::vector<std::vector<std::size_t>> groups;
    std::size_t last_end = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t j = i;
        while (j + 1 < order.size() && ranks[order[j + 1]] - ranks[order[i]] < cd) {
            ++j;
        }
        if (i == 0 || j + 1 > last_end) {
            groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                                order.begin() + static_cast<std::ptrdiff_t>(j + 1));
            last_end = j + 1;
        }
    }
    return groups;
}

inline CDResult cd_report(const ScoreMatrix& m, double alpha = 0.05) {
    CDResult r;
    r.names = m.cols;
    r.mean_ranks = mean_ranks(m);
    r.n = m.n();
    r.alpha = alpha;
    r.friedman_chi2 = friedman_statistic(r.mean_ranks, m.n(), m.k());
    r.friedman_p = friedman_p_value(r.friedman_chi2, m.k());
    r.cd = nemenyi_cd(m.k(), m.n(), alpha);
    r.groups = cd_groups(r.mean_ranks, r.cd);
    return r;
}

} // namespace golu
