#include <golu/ranking.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

namespace {

using namespace golu;

ScoreMatrix matrix(std::vector<std::vector<double>> scores, bool higher = true) {
    ScoreMatrix m;
    for (std::size_t r = 0; r < scores.size(); ++r) {
        m.rows.push_back("row" + std::to_string(r));
    }
    for (std::size_t c = 0; c < scores.front().size(); ++c) {
        m.cols.push_back("m" + std::to_string(c));
    }
    m.scores = std::move(scores);
    m.higher_is_better = higher;
    return m;
}

ScoreMatrix load_imagenet_scores() {
    std::ifstream is(std::string(GOLU_DATA_DIR) + "/table2.csv");
    return read_score_csv(is, true);
}

TEST(Ranks, HandExample) {
    const auto m = matrix({{3, 1, 2}, {3, 1, 2}});
    EXPECT_EQ(rank_row(m.scores[0], true), (std::vector<double>{1, 3, 2}));
    EXPECT_EQ(mean_ranks(m), (std::vector<double>{1, 3, 2}));
    EXPECT_EQ(friedman_statistic({1, 3, 2}, 2, 3), 4.0);
}

TEST(Ranks, TiesAreAveraged) {
    EXPECT_EQ(rank_row({5, 5, 1}, true), (std::vector<double>{1.5, 1.5, 3}));
    EXPECT_EQ(rank_row({2, 2, 2, 0}, true), (std::vector<double>{2, 2, 2, 4}));
    EXPECT_EQ(rank_row({5, 5, 1}, false), (std::vector<double>{2.5, 2.5, 1}));
}

TEST(Ranks, SumIsConserved) {
    const auto m = matrix({{0.1, 0.4, 0.4, 0.2}, {9, 8, 7, 6}, {1, 1, 1, 1}});
    const auto r = mean_ranks(m);
    EXPECT_DOUBLE_EQ(std::accumulate(r.begin(), r.end(), 0.0), 10.0);
}

TEST(Friedman, EqualRanksGiveZero) {
    EXPECT_EQ(friedman_statistic({2, 2, 2}, 5, 3), 0.0);
    EXPECT_NEAR(friedman_p_value(0.0, 3), 1.0, 1e-15);
}

TEST(Nemenyi, CriticalDifference) {
    EXPECT_NEAR(nemenyi_cd(7, 18, 0.05), 2.949 * std::sqrt(56.0 / 108.0), 1e-12);
    EXPECT_NEAR(nemenyi_cd(7, 18, 0.05), 2.124, 1e-3);
    for (std::size_t n : {1u, 4u, 9u, 30u}) {
        EXPECT_NEAR(nemenyi_cd(2, n, 0.05), 1.960 / std::sqrt(static_cast<double>(n)), 1e-12);
        EXPECT_NEAR(nemenyi_cd(5, 4 * n, 0.10), 0.5 * nemenyi_cd(5, n, 0.10), 1e-12);
    }
    EXPECT_THROW(nemenyi_cd(11, 5, 0.05), RangeError);
    EXPECT_THROW(nemenyi_cd(1, 5, 0.05), RangeError);
    EXPECT_THROW(nemenyi_cd(5, 5, 0.01), RangeError);
}

TEST(ImagenetScores, GoluBestAndGeluSecond) {
    const ScoreMatrix m = load_imagenet_scores();
    ASSERT_EQ(m.n(), 9u);
    ASSERT_EQ(m.k(), 7u);
    const CDResult r = cd_report(m, 0.05);
    ASSERT_EQ(r.names.back(), "GoLU");
    // Mean ranks computed independently from the same table.
    const std::vector<double> expected{4.222222222222222, 3.7777777777777777, 7.0, 2.5555555555555554,
                                       4.888888888888889, 4.444444444444445, 1.1111111111111112};
    for (std::size_t j = 0; j < 7; ++j) {
        EXPECT_NEAR(r.mean_ranks[j], expected[j], 1e-14) << r.names[j];
    }
    std::vector<std::size_t> order(7);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return r.mean_ranks[a] < r.mean_ranks[b]; });
    EXPECT_EQ(r.names[order[0]], "GoLU");
    EXPECT_EQ(r.names[order[1]], "GELU");
    EXPECT_NEAR(r.friedman_chi2, 39.57142857142855, 1e-10);
    EXPECT_GT(r.friedman_chi2, 12.591587243743977);  // chi2 0.95 quantile, 6 df
    EXPECT_NEAR(r.friedman_p, 5.529392499649365e-07, 1e-15);
    EXPECT_NEAR(r.cd, 2.949 * std::sqrt(56.0 / 54.0), 1e-12);
}

TEST(CombinedScores, Loads) {
    std::ifstream is(std::string(GOLU_DATA_DIR) + "/combined.csv");
    const ScoreMatrix m = read_score_csv(is, true);
    EXPECT_EQ(m.k(), 7u);
    EXPECT_EQ(m.n(), 25u);
    EXPECT_NO_THROW(cd_report(m));
}

TEST(CdReport, MonotoneTransformAndOrientationInvariance) {
    const auto m = matrix({{0.7, 0.2, 0.5, 0.9}, {1.5, 2.5, 0.5, 3.0}, {2, 1, 3, 3}, {0.1, 0.3, 0.2, 0.4}});
    const CDResult base = cd_report(m);

    auto t = m;
    for (auto& row : t.scores) {
        for (double& v : row) {
            v = std::exp(3.0 * v) + 7.0;
        }
    }
    const CDResult mono = cd_report(t);
    EXPECT_EQ(mono.mean_ranks, base.mean_ranks);
    EXPECT_EQ(mono.groups, base.groups);
    EXPECT_EQ(mono.friedman_chi2, base.friedman_chi2);

    auto f = m;
    f.higher_is_better = false;
    for (auto& row : f.scores) {
        for (double& v : row) {
            v = -v;
        }
    }
    const CDResult flipped = cd_report(f);
    EXPECT_EQ(flipped.mean_ranks, base.mean_ranks);
    EXPECT_EQ(flipped.groups, base.groups);
    EXPECT_EQ(flipped.cd, base.cd);
}

TEST(CdReport, IdenticalColumnsFormOneGroup) {
    const auto m = matrix({{1, 1, 1}, {2, 2, 2}, {0.5, 0.5, 0.5}});
    const CDResult r = cd_report(m);
    ASSERT_EQ(r.groups.size(), 1u);
    EXPECT_EQ(r.groups[0].size(), 3u);
    EXPECT_EQ(r.friedman_chi2, 0.0);
}

TEST(CdReport, DominantColumnIsASingleton) {
    std::vector<std::vector<double>> scores;
    for (int i = 0; i < 60; ++i) {
        scores.push_back({10.0, static_cast<double>(i % 3), static_cast<double>((i + 1) % 3),
                          static_cast<double>((i + 2) % 3)});
    }
    const CDResult r = cd_report(matrix(scores));
    EXPECT_LT(r.cd, 1.0);
    EXPECT_EQ(r.mean_ranks[0], 1.0);
    ASSERT_GE(r.groups.size(), 2u);
    EXPECT_EQ(r.groups[0], (std::vector<std::size_t>{0}));
}

TEST(CdGroups, OverlappingCliques) {
    // ranks 1, 1.5, 2.4, 3.5 with cd 1: {0,1}, {1,2}, {3}
    const auto g = cd_groups({1.0, 1.5, 2.4, 3.5}, 1.0);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g[0], (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(g[1], (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(g[2], (std::vector<std::size_t>{3}));
}

TEST(ScoreMatrixInput, Errors) {
    std::istringstream nan_cell("label,a,b\nr1,1,nan\nr2,2,3\n");
    EXPECT_THROW(read_score_csv(nan_cell, true), DataError);
    std::istringstream missing("label,a,b\nr1,1\nr2,2,3\n");
    EXPECT_THROW(read_score_csv(missing, true), DataError);
    std::istringstream one_row("label,a,b\nr1,1,2\n");
    EXPECT_THROW(read_score_csv(one_row, true), DataError);
    std::istringstream junk("label,a,b\nr1,1,x\nr2,2,3\n");
    EXPECT_THROW(read_score_csv(junk, true), DataError);
    std::istringstream empty("");
    EXPECT_THROW(read_score_csv(empty, true), DataError);
}

} // namespace
