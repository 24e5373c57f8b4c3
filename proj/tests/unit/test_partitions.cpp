#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/partitions.hpp"

namespace pathvar {
namespace {

TEST(UniformDyadic, Points) {
    const Partition p1 = uniform_dyadic(1, 1.0);
    ASSERT_EQ(p1.size(), 3u);
    EXPECT_DOUBLE_EQ(p1.times()[1], 0.5);
    const Partition p0 = uniform_dyadic(0, 2.5);
    ASSERT_EQ(p0.size(), 2u);
    EXPECT_DOUBLE_EQ(p0.times()[0], 0.0);
    EXPECT_DOUBLE_EQ(p0.times()[1], 2.5);
}

TEST(UniformDyadic, MeshHalves) {
    for (int n = 0; n < 12; ++n) EXPECT_DOUBLE_EQ(uniform_dyadic(n + 1, 3.0).mesh(), 0.5 * uniform_dyadic(n, 3.0).mesh());
    EXPECT_THROW(uniform_dyadic(-1, 1.0), ValidationError);
}

TEST(UniformDyadic, IntervalOf) {
    const Partition p = uniform_dyadic(2, 1.0);
    EXPECT_EQ(p.interval_of(0.0), 0u);
    EXPECT_EQ(p.interval_of(0.25), 1u);
    EXPECT_EQ(p.interval_of(0.99), 3u);
    EXPECT_EQ(p.interval_of(1.0), 4u);
}

TEST(LebesgueDyadic, Line) {
    const Partition p = lebesgue_dyadic(test::line_path(1.0, 64), 1);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_NEAR(p.times()[1], 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(p.times()[2], 1.0);
    EXPECT_FALSE(p.terminal_stub());
}

TEST(LebesgueDyadic, SineHitsHalfLevels) {
    // sin(2 pi t) = +-1/2, +-1, 0 in order.
    const std::vector<double> expected{0.0, 1.0 / 12, 0.25, 5.0 / 12, 0.5, 7.0 / 12, 0.75, 11.0 / 12, 1.0};
    const Partition p = lebesgue_dyadic(test::sine_path(4800), 1);
    ASSERT_EQ(p.size(), expected.size());
    for (std::size_t j = 0; j < expected.size(); ++j) EXPECT_NEAR(p.times()[j], expected[j], 1e-3) << j;
}

TEST(LebesgueDyadic, MonotonePathHasOneIntervalPerCell) {
    // 0 -> 1 slightly overshooting, so 2^n crossings plus the stub to T.
    const auto s = test::line_path(1.0 + 1e-3, 4096);
    for (int n = 1; n <= 8; ++n) {
        const Partition p = lebesgue_dyadic(s, n);
        EXPECT_EQ(p.num_intervals(), (std::size_t{1} << n) + 1) << n;
        EXPECT_TRUE(p.terminal_stub());
    }
}

TEST(LebesgueDyadic, ConsecutiveValuesDifferByOneLevel) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = test::bm_path(1 << 16, seed, 1.0 / 16);
        for (int n = 2; n <= 7; ++n) {
            const Partition p = lebesgue_dyadic(s, n);
            const auto v = partition_values(s, p);
            const double h = std::ldexp(1.0, -n);
            const std::size_t first = p.initial_on_grid() ? 0 : 1;
            const std::size_t last = p.terminal_stub() ? p.num_intervals() - 1 : p.num_intervals();
            for (std::size_t j = first; j < last; ++j) EXPECT_NEAR(std::abs(v[j + 1] - v[j]), h, 1e-12);
            for (std::size_t j = 1; j < p.size(); ++j) EXPECT_LT(p.times()[j - 1], p.times()[j]);
        }
    }
}

TEST(LebesgueDyadic, ResolutionGuard) {
    const auto s = test::from_samples({0.0, 0.3, 0.0});
    EXPECT_THROW(lebesgue_dyadic(s, 2), ResolutionError);
    EXPECT_NO_THROW(lebesgue_dyadic(s, 1));
    EXPECT_THROW(lebesgue_dyadic(SampledPath(1.0, 2, {0, 0, 1, 1}), 1), ValidationError);
}

TEST(LebesgueDyadic, OffGridStart) {
    const auto s = test::line_path(1.0, 100, 1.0, 0.1);
    const Partition p = lebesgue_dyadic(s, 2);
    EXPECT_FALSE(p.initial_on_grid());
    // First hit is 0.25 at t = 0.15.
    EXPECT_NEAR(p.times()[1], 0.15, 1e-12);
}

TEST(Oscillation, LineAndConstant) {
    const auto line = test::line_path(1.0, 1024);
    for (int n = 0; n <= 8; ++n) EXPECT_NEAR(oscillation(line, uniform_dyadic(n, 1.0)), std::ldexp(1.0, -n), 1e-12);
    EXPECT_EQ(oscillation(test::constant_path(0.3, 64), uniform_dyadic(3, 1.0)), 0.0);
}

TEST(Oscillation, SineOnHalves) {
    const auto s = test::sine_path(4096);
    const std::vector<double> pi{0.0, 0.5, 1.0};
    const double oracle = std::max(test::dense_range(s, 0.0, 0.5), test::dense_range(s, 0.5, 1.0));
    EXPECT_NEAR(oracle, 1.0, 1e-6);
    EXPECT_NEAR(oscillation(s, pi), oracle, 1e-12);
}

TEST(Oscillation, MatchesDenseRangeOnRandomPaths) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = test::bm_path(300, seed);
        const std::vector<double> pi{0.0, 0.113, 0.5, 0.77, 1.0};
        double oracle = 0.0;
        for (std::size_t j = 0; j + 1 < pi.size(); ++j) oracle = std::max(oracle, test::dense_range(s, pi[j], pi[j + 1]));
        EXPECT_NEAR(oscillation(s, pi), oracle, 1e-12);
    }
}

TEST(Oscillation, ShrinksAlongBothSchemes) {
    const auto s = test::bm_path(1 << 16, 17, 1.0 / 16);
    double prev_u = 1e300, prev_l = 1e300;
    for (int n = 2; n <= 7; ++n) {
        const double u = oscillation(s, uniform_dyadic(n, s.horizon()));
        const double l = oscillation(s, lebesgue_dyadic(s, n));
        EXPECT_LE(u, prev_u);
        EXPECT_LT(l, prev_l);
        // Lebesgue intervals never leave two adjacent cells.
        EXPECT_LE(l, 2.0 * std::ldexp(1.0, -n) + 1e-12);
        prev_u = u;
        prev_l = l;
    }
    EXPECT_LT(prev_l, 0.02);
}

TEST(Crossings, SineHalfCell) {
    const auto s = test::sine_path(4800);
    const CrossingCounts c = crossing_counts(s, 1, 0, 1.0);
    EXPECT_EQ(c.up, 1);
    EXPECT_EQ(c.down, 1);
    // (1/2, 1] is crossed up then down; (-1/2, 0] only downward by t = 0.9.
    EXPECT_EQ(crossing_counts(s, 1, 1, 1.0).total(), 2);
    const CrossingCounts below = crossing_counts(s, 1, -1, 0.9);
    EXPECT_EQ(below.up, 0);
    EXPECT_EQ(below.down, 1);
    EXPECT_EQ(crossing_counts(s, 1, 2, 1.0).total(), 0);
}

TEST(Crossings, MonotoneAndConstant) {
    const auto s = test::line_path(1.0 + 1e-3, 2048);
    for (int k = 0; k < 16; ++k) {
        const CrossingCounts c = crossing_counts(s, 4, k, 1.0);
        EXPECT_EQ(c.up, 1);
        EXPECT_EQ(c.down, 0);
    }
    const CrossingTable flat = crossing_table(lebesgue_dyadic(test::constant_path(0.3, 64), 3), 1.0);
    EXPECT_EQ(flat.max_total(), 0);
}

TEST(Crossings, UpAndDownDifferByAtMostOne) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = test::bm_path(1 << 16, seed, 1.0 / 16);
        const Partition p = lebesgue_dyadic(s, 6);
        for (double t : {0.01, 0.037, 0.05, 1.0 / 16}) {
            const CrossingTable table = crossing_table(p, t);
            for (std::int64_t k = table.first_cell; k <= table.last_cell(); ++k) {
                const CrossingCounts c = table.at(k);
                EXPECT_LE(std::abs(c.up - c.down), 1);
            }
        }
    }
}

TEST(Crossings, CellIndex) {
    EXPECT_EQ(cell_index(0.5, 1), 0);
    EXPECT_EQ(cell_index(0.5000001, 1), 1);
    EXPECT_EQ(cell_index(0.0, 1), -1);
    EXPECT_EQ(cell_index(-0.2, 2), -1);
}

TEST(Scheme, Parse) {
    EXPECT_EQ(parse_scheme("uniform"), Scheme::uniform);
    EXPECT_EQ(parse_scheme("lebesgue"), Scheme::lebesgue);
    EXPECT_THROW(parse_scheme("dyadic"), ValidationError);
    EXPECT_EQ(to_string(Scheme::lebesgue), "lebesgue");
}

}  // namespace
}  // namespace pathvar
