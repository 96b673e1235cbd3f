#include <golu/csv.hpp>
#include <golu/stats.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

namespace {

using namespace golu;

TEST(Histogram, CountsWithInclusiveRightEdge) {
    const std::vector<double> v{0.0, 0.1, 0.5, 0.99, 1.0, 2.0, -0.1};
    const Histogram h = make_histogram(v, 2, 0.0, 1.0);
    ASSERT_EQ(h.counts.size(), 2u);
    EXPECT_EQ(h.counts[0], 2u);
    EXPECT_EQ(h.counts[1], 3u);
    EXPECT_EQ(h.total(), 5u);
    EXPECT_EQ(h.edges.front(), 0.0);
    EXPECT_EQ(h.edges.back(), 1.0);
}

TEST(Histogram, SampleRangeAndDegenerateInput) {
    const std::vector<double> v{3.0, 3.0, 3.0};
    const Histogram h = make_histogram(v, 4);
    EXPECT_EQ(h.total(), 3u);
    EXPECT_EQ(h.edges.front(), 2.5);
    EXPECT_THROW(make_histogram(v, 0), UsageError);
    EXPECT_THROW(make_histogram(v, 3, 1.0, 0.0), UsageError);
}

TEST(Moments, MeanAndPopulationVariance) {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(mean_of(v), 2.5);
    EXPECT_EQ(population_variance(v), 1.25);
}

TEST(Quantile, LinearInterpolation) {
    const std::vector<double> v{4.0, 1.0, 3.0, 2.0, 5.0};
    EXPECT_EQ(quantile(v, 0.0), 1.0);
    EXPECT_EQ(quantile(v, 0.5), 3.0);
    EXPECT_EQ(quantile(v, 1.0), 5.0);
    EXPECT_DOUBLE_EQ(quantile(v, 0.1), 1.4);
    EXPECT_THROW(quantile({}, 0.5), UsageError);
}

TEST(Interval, CentralAndIntersection) {
    std::vector<double> v(101);
    for (int i = 0; i <= 100; ++i) {
        v[i] = i;
    }
    const Interval c = central_interval(v, 0.98);
    EXPECT_DOUBLE_EQ(c.lo, 1.0);
    EXPECT_DOUBLE_EQ(c.hi, 99.0);
    EXPECT_TRUE(c.contains(50.0));
    EXPECT_FALSE(c.contains(0.5));
    EXPECT_THROW(central_interval(v, 0.0), UsageError);

    const std::vector<Interval> ivs{{-1.0, 2.0}, {0.0, 3.0}};
    EXPECT_EQ(intersect(ivs), (Interval{0.0, 2.0}));
    const std::vector<Interval> disjoint{{0.0, 1.0}, {2.0, 3.0}};
    EXPECT_THROW(intersect(disjoint), UsageError);
}

TEST(Csv, NumbersRoundTrip) {
    for (double x : {0.1, -2.5e-300, 1.0 / 3.0, 6.02214076e23}) {
        EXPECT_EQ(csv::parse_double(csv::num(x)), x);
        EXPECT_EQ(csv::parse_double(csv::num17(x)), x);
    }
    EXPECT_EQ(csv::num(std::nan("")), "nan");
    EXPECT_TRUE(std::isnan(csv::parse_double("nan")));
    EXPECT_THROW(csv::parse_double("1.5x"), DataError);
    EXPECT_THROW(csv::parse_double(""), DataError);
}

TEST(Csv, ReaderSkipsCommentsAndBlankLines) {
    std::istringstream is("# note\n\na, b ,c\r\n1,2,3\n");
    const auto rows = csv::read_rows(is);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(rows[1][2], "3");
}

} // namespace
