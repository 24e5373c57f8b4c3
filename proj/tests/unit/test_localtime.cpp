#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pathvar/calculus.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/localtime.hpp"
#include "pathvar/random.hpp"

namespace pathvar {
namespace {

/// One-node grid centred on x.
SpatialGrid single_node(double x, double spacing = 1e-3) { return {x - 0.5 * spacing, spacing, 1}; }

double value_at(const LocalTimeGrid& lt, double x) {
    const auto i = static_cast<std::size_t>(std::floor((x - lt.grid.origin) / lt.grid.spacing));
    return lt.values.at(i);
}

TEST(SpatialGrid, DyadicCoversRangeWithEightNodesPerCell) {
    const SpatialGrid g = SpatialGrid::dyadic(-0.3, 0.7, 3);
    EXPECT_DOUBLE_EQ(g.spacing, 1.0 / 64);
    EXPECT_LE(g.lower(), -0.3 - 0.125);
    EXPECT_GE(g.upper(), 0.7 + 0.125);
    EXPECT_DOUBLE_EQ(std::fmod(g.origin * 8, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(g.x(0), g.origin + 1.0 / 128);
}

TEST(RawLocalTime, ConstantPathIsZero) {
    const auto s = test::constant_path(0.3, 64);
    const SpatialGrid g = SpatialGrid::for_path(s, 4);
    const auto lt = local_time_raw(s, uniform_dyadic(4, 1.0), 2, 1.0, g);
    for (double v : lt.values) EXPECT_EQ(v, 0.0);
}

TEST(RawLocalTime, MonotoneLineJustBelowALevel) {
    const auto s = test::line_path(1.0, 1 << 10);
    for (int n = 1; n <= 6; ++n) {
        const double h = std::ldexp(1.0, -n);
        const double x = 0.5 - 1e-4;
        const auto lt = local_time_raw(s, lebesgue_dyadic(s, n), 2, 1.0, single_node(x, 1e-5));
        // Only the leg (0.5 - h, 0.5] contains x and it ends at 0.5.
        EXPECT_NEAR(lt.values[0], 0.5 - x, 1e-12);
        EXPECT_LE(lt.values[0], h);
    }
}

TEST(RawLocalTime, SineExampleFromHandEnumeratedLegs) {
    // Lebesgue level 1 of sin(2 pi t): the eight legs between the levels
    // 0, 1/2, 1, 1/2, 0, -1/2, -1, -1/2, 0. Only (0, 1/2] and (1/2 -> 0)
    // contain x = 1/4, each contributing |endpoint - 1/4| = 1/4.
    const std::vector<std::pair<double, double>> legs{{0.0, 0.5},  {0.5, 1.0},   {1.0, 0.5},   {0.5, 0.0},
                                                      {0.0, -0.5}, {-0.5, -1.0}, {-1.0, -0.5}, {-0.5, 0.0}};
    const double oracle = test::leg_local_time(legs, 0.25, 2);
    EXPECT_DOUBLE_EQ(oracle, 0.5);
    const auto s = test::sine_path(4800);
    const auto lt = local_time_raw(s, lebesgue_dyadic(s, 1), 2, 1.0, single_node(0.25));
    EXPECT_NEAR(lt.values[0], oracle, 1e-9);
}

TEST(RawLocalTime, MatchesLegOracleOnRandomPaths) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto s = test::bm_path(1 << 12, derive_seed(61, seed), 1.0 / 16);
        for (int p : {2, 4}) {
            for (Scheme scheme : {Scheme::uniform, Scheme::lebesgue}) {
                const Partition pi = scheme == Scheme::uniform ? uniform_dyadic(5, s.horizon()) : lebesgue_dyadic(s, 4);
                const double t = 0.7 * s.horizon();
                std::vector<std::pair<double, double>> legs;
                const auto times = pi.times();
                for (std::size_t j = 0; j + 1 < times.size() && times[j] <= t; ++j) {
                    const double a = s.at(times[j]), b = s.at(std::min(times[j + 1], t));
                    if (a != b) legs.emplace_back(a, b);
                }
                const SpatialGrid g = SpatialGrid::for_path(s, 4);
                const auto lt = local_time_raw(s, pi, p, t, g);
                for (std::size_t i = 0; i < g.size; i += 3) {
                    const double oracle = test::leg_local_time(legs, g.x(i), p);
                    EXPECT_NEAR(lt.values[i], oracle, 1e-12);
                    EXPECT_GE(lt.values[i], 0.0);
                }
            }
        }
    }
}

TEST(UpcrossingLocalTime, MonotonePathBoundedByOneCrossing) {
    const auto s = test::line_path(1.0 + 1e-3, 1 << 10);
    for (int p : {2, 4}) {
        for (int n = 1; n <= 6; ++n) {
            const auto lt = local_time_upcrossing(s, n, p, 1.0, SpatialGrid::for_path(s, n));
            for (double v : lt.values) EXPECT_LE(v, std::pow(2.0, -n * (p - 1)) + 1e-15);
        }
    }
}

TEST(UpcrossingLocalTime, UnvisitedCellsAreZero) {
    const auto s = test::bm_path(1 << 12, 62, 1.0 / 16);
    const int n = 4;
    const SpatialGrid g = SpatialGrid::for_path(s, n);
    const auto lt = local_time_upcrossing(s, n, 2, s.horizon(), g);
    for (std::size_t i = 0; i < g.size; ++i) {
        const double x = g.x(i);
        if (x < s.min_value() - std::ldexp(1.0, -n) || x > s.max_value() + std::ldexp(1.0, -n))
            EXPECT_EQ(lt.values[i], 0.0);
    }
}

TEST(UpcrossingLocalTime, ConsistentWithRawAtEveryNode) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto s = test::bm_path(1 << 14, derive_seed(63, seed), 1.0 / 256);
        for (int p : {2, 4}) {
            for (int n = 4; n <= 7; ++n) {
                const SpatialGrid g = SpatialGrid::for_path(s, n);
                const auto c = upcrossing_consistency(s, n, p, s.horizon(), g);
                EXPECT_TRUE(c.holds);
                EXPECT_LE(c.max_gap, c.bound);
                EXPECT_NEAR(c.bound, 2.0 * std::pow(2.0, -n * (p - 1)) * (1.0 + static_cast<double>(c.max_crossings)),
                            1e-15);
            }
        }
    }
}

TEST(AveragingOperator, IndicatorOfACellIsFixed) {
    const int n = 2;
    const SpatialGrid g = SpatialGrid::dyadic(0.0, 1.0, n);
    std::vector<double> f(g.size);
    for (std::size_t i = 0; i < g.size; ++i) f[i] = cell_index(g.x(i), n) == 1 ? 1.0 : 0.0;
    EXPECT_EQ(averaging_operator(f, g, n), f);
}

TEST(AveragingOperator, IdentityOnUnitCellAveragesToHalf) {
    const SpatialGrid g{0.0, 1.0 / 64, 64};
    std::vector<double> f(g.size);
    for (std::size_t i = 0; i < g.size; ++i) f[i] = g.x(i);
    for (double v : averaging_operator(f, g, 0)) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(AveragingOperator, PreservesIntegralAndIsIdempotent) {
    Engine rng = make_engine(64);
    std::normal_distribution<double> z;
    const int n = 3;
    const SpatialGrid g = SpatialGrid::dyadic(-1.0, 1.0, n);
    std::vector<double> f(g.size);
    for (double& v : f) v = z(rng);
    const auto a = averaging_operator(f, g, n);
    double fi = 0.0, ai = 0.0;
    for (std::size_t i = 0; i < g.size; ++i) {
        fi += f[i] * g.spacing;
        ai += a[i] * g.spacing;
    }
    EXPECT_NEAR(ai, fi, 1e-8);
    EXPECT_EQ(averaging_operator(a, g, n), a);
}

TEST(AveragingOperator, RejectsUnderResolvedGrid) {
    const SpatialGrid coarse{0.0, 0.25, 8};
    EXPECT_THROW(averaging_operator(std::vector<double>(8, 1.0), coarse, 1), ValidationError);
    const SpatialGrid misaligned{0.01, 1.0 / 64, 64};
    EXPECT_THROW(averaging_operator(std::vector<double>(64, 1.0), misaligned, 1), ValidationError);
}

TEST(WeakPairing, ZeroAndUnit) {
    LocalTimeGrid lt;
    lt.grid = {0.0, 1.0 / 128, 128};
    lt.values.assign(128, 0.0);
    EXPECT_EQ(weak_pairing(lt, [](double x) { return std::exp(x); }), 0.0);
    lt.values.assign(128, 1.0);
    EXPECT_NEAR(weak_pairing(lt, [](double) { return 1.0; }), 1.0, 1e-14);
    EXPECT_NEAR(lt.integral(), 1.0, 1e-14);
}

TEST(WeakPairing, PanelHasFiveFunctions) {
    const auto panel = test_panel(0.2, 0.5);
    ASSERT_EQ(panel.size(), 5u);
    EXPECT_EQ(panel[3].g(0.2 + 0.5), 1.0);
    EXPECT_EQ(panel[3].g(0.2 + 0.51), 0.0);
}

TEST(WeakPairing, RawAgainstUpcrossingFactor) {
    // Averaging over a cell turns |b - x|^{p-1} into h^{p-1}/p per crossing,
    // so pairings of raw and upcrossing local times approach the ratio 2/p.
    for (int p : {2, 4}) {
        std::vector<double> ratios;
        for (std::uint64_t seed = 0; seed < 16; ++seed) {
            const int n = 10;
            const double T = resolvable_horizon(0.5, 1 << 16, n);
            const auto s = test::bm_path(1 << 16, derive_seed(65, seed), T);
            const SpatialGrid g = SpatialGrid::for_path(s, n);
            const auto raw = local_time_raw(s, lebesgue_dyadic(s, n), p, T, g);
            const auto tilde = local_time_upcrossing(s, n, p, T, g);
            const double c = 0.5 * (s.min_value() + s.max_value());
            const double w = 0.5 * (s.max_value() - s.min_value());
            const auto bump = [c, w](double x) { return std::exp(-0.5 * std::pow((x - c) / (0.5 * w), 2)); };
            ratios.push_back(weak_pairing(raw, bump) / weak_pairing(tilde, bump));
        }
        EXPECT_NEAR(test::median_of(ratios), 2.0 / p, 0.1 * 2.0 / p) << "p=" << p;
    }
}

TEST(Tanaka, PointMassRampIsExactAtEveryLevel) {
    const std::vector<SampledPath> paths{test::bm_path(1 << 12, 66), test::fbm_path(0.25, 1 << 12, 67),
                                         test::sine_path(999), test::gaussian_walk(500, 0.1, 68)};
    for (int p : {2, 4}) {
        for (double a : {0.0, 0.137, -0.2}) {
            const FunctionPtr f = make_ramp(a, p - 1);
            for (const auto& s : paths) {
                for (int n = 0; n <= 10; ++n) {
                    for (double frac : {0.55, 1.0}) {
                        const double t = frac * s.horizon();
                        const auto r = tanaka_residual(*f, s, uniform_dyadic(n, s.horizon()), p, t);
                        EXPECT_LT(std::abs(r.residual), 1e-10 * (1 + std::abs(f->value1(s.at(t)))))
                            << "p=" << p << " a=" << a << " n=" << n;
                    }
                }
            }
        }
    }
}

TEST(Tanaka, IndicatorDensityRampIsExact) {
    // ((x)^+)^p / p!: the (p-1)-th derivative is a ramp with indicator density.
    const auto s = test::bm_path(1 << 12, 69);
    for (int p : {2, 4}) {
        const FunctionPtr f = make_ramp(0.0, p);
        for (int n = 0; n <= 10; ++n) {
            const auto r = tanaka_residual(*f, s, uniform_dyadic(n, 1.0), p, 1.0);
            EXPECT_LT(std::abs(r.residual), 1e-9) << "p=" << p << " n=" << n;
        }
    }
}

TEST(Tanaka, IndicatorOnThreeLegToyPath) {
    // Path 0 -> 1 -> -1 -> 0.5 sampled at its turning points, p = 2,
    // f = (x^+)^2 / 2, f' = x^+, df' = 1_{[0, inf)} dx.
    // int L df' = sum over legs of int_{(min,max] ∩ [0,inf)} |b - x| dx:
    //   0 -> 1:    int_0^1 (1 - x) dx = 1/2
    //   1 -> -1:   int_0^1 (x + 1) dx = 3/2
    //   -1 -> 0.5: int_0^0.5 (0.5 - x) dx = 1/8
    const auto s = test::from_samples({0.0, 1.0, -1.0, 0.5}, 3.0);
    const Partition pi({0.0, 1.0, 2.0, 3.0}, Scheme::uniform, 0);
    const auto r = tanaka_residual(*make_ramp(0.0, 2), s, pi, 2, 3.0);
    EXPECT_NEAR(r.local_time_term, 0.5 + 1.5 + 0.125, 1e-14);
    EXPECT_NEAR(r.residual, 0.0, 1e-14);
}

TEST(Tanaka, SmoothRouteAgreesWithChangeOfVariable) {
    const auto s = test::fbm_path(0.3, 1 << 12, 70);
    for (int p : {2, 4}) {
        std::vector<double> c{0.1, 0.4, -0.3, 0.2, 0.05};
        c.resize(static_cast<std::size_t>(p) + 1);
        const FunctionPtr f = make_polynomial(c);
        const auto cov = change_of_variable_residual(*f, s, {Scheme::uniform, 2, 9}, p, std::vector<double>{1.0});
        for (const auto& lvl : cov.levels) {
            const auto r = tanaka_residual(*f, s, uniform_dyadic(lvl.n, 1.0), p, 1.0);
            EXPECT_NEAR(r.residual, lvl.residuals[0], 1e-8);
        }
        // A non-polynomial smooth f through Gauss-Legendre quadrature.
        const auto rc = tanaka_residual(*parse_function("cos"), s, uniform_dyadic(6, 1.0), p, 1.0);
        EXPECT_LT(std::abs(rc.residual), 1e-9);
    }
}

TEST(Occupation, LineHasUnitDensity) {
    const auto s = test::line_path(1.0, 1 << 10);
    for (int n = 1; n <= 6; ++n) {
        const auto occ = occupation_density(s, 1.0, n);
        for (std::size_t i = 0; i < occ.grid.size; ++i) {
            const double x = occ.grid.x(i);
            if (x > 0.0 && x < 1.0) EXPECT_NEAR(occ.values[i], 1.0, 1e-9);
        }
        EXPECT_FALSE(occ.degenerate);
    }
}

TEST(Occupation, ConstantPathIsDegenerate) {
    const auto s = test::constant_path(0.3, 100);
    const int n = 3;
    const auto occ = occupation_density(s, 1.0, n);
    EXPECT_TRUE(occ.degenerate);
    EXPECT_FALSE(occ.warnings.empty());
    EXPECT_NEAR(value_at(occ, 0.3), 8.0, 1e-12);
    EXPECT_NEAR(occ.integral(), 1.0, 1e-12);
}

TEST(Occupation, MassIsElapsedTime) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto s = test::bm_path(1 << 12, derive_seed(71, seed));
        for (double t : {0.3, 1.0}) EXPECT_NEAR(occupation_density(s, t, 6).integral(), t, 1e-9);
    }
}

TEST(Measure, LebesgueMassCountsHits) {
    const auto s = test::line_path(1.0 + 1e-3, 1 << 10);
    const int n = 3;
    const Partition pi = lebesgue_dyadic(s, n);
    // Eight hits, the terminal stub is not a hit.
    EXPECT_NEAR(lebesgue_measure_mass(pi, 2, 1.0), 8.0 / 64.0, 1e-15);
    EXPECT_NEAR(lebesgue_measure_mass(pi, 2, 0.5), 4.0 / 64.0, 1e-15);
}

TEST(Measure, GaussianMoments) {
    EXPECT_EQ(gaussian_abs_moment(2), 1.0);
    EXPECT_EQ(gaussian_abs_moment(4), 3.0);
    EXPECT_EQ(gaussian_abs_moment(6), 15.0);
    EXPECT_THROW(gaussian_abs_moment(3), ValidationError);
}

TEST(Conjecture, ResolvableHorizon) {
    EXPECT_NEAR(resolvable_horizon(0.5, 1 << 16, 10), 65536.0 * std::pow(std::ldexp(1.0, -14), 2), 1e-18);
    const double T = resolvable_horizon(0.25, 1 << 10, 6);
    EXPECT_NEAR(std::pow(T / 1024.0, 0.25), std::ldexp(1.0, -10), 1e-15);
}

TEST(Conjecture, ConstantPathIsFlagged) {
    const std::vector<SampledPath> paths{test::constant_path(0.0, 256)};
    const auto r = conjecture_on_paths(paths, 0.5, 3, 4);
    EXPECT_EQ(r.degenerate_paths, 1u);
    EXPECT_FALSE(r.warnings.empty());
    for (const auto& lvl : r.levels) EXPECT_EQ(lvl.median_mu_ratio, 0.0);
}

TEST(Conjecture, SmallEnsembleReport) {
    ConjectureOptions o;
    o.hurst = 0.25;
    o.ensemble = 4;
    o.num_steps = 1 << 12;
    o.first_level = 3;
    o.last_level = 5;
    o.threads = 2;
    const auto r = conjecture_experiment(o);
    EXPECT_EQ(r.p, 4);
    EXPECT_EQ(r.moment, 3.0);
    ASSERT_EQ(r.levels.size(), 3u);
    for (const auto& lvl : r.levels) {
        EXPECT_EQ(lvl.sup_gaps.size(), 4u);
        EXPECT_NEAR(lvl.mu_gap, std::abs(lvl.median_mu_ratio - 3.0), 1e-15);
    }
    o.threads = 1;
    const auto again = conjecture_experiment(o);
    EXPECT_EQ(again.levels.back().sup_gaps, r.levels.back().sup_gaps);
    o.hurst = 0.3;
    EXPECT_THROW(conjecture_experiment(o), ValidationError);
}

}  // namespace
}  // namespace pathvar
