#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/partitions.hpp"
#include "pathvar/paths.hpp"

namespace pathvar {
namespace {

using test::bm_path;
using test::fbm_path;
using test::line_path;

TEST(SampledPath, InterpolatesLinearlyBetweenSamples) {
    const SampledPath s = test::from_samples({0.0, 1.0, -1.0}, 2.0);
    EXPECT_DOUBLE_EQ(s.at(0.5), 0.5);
    EXPECT_DOUBLE_EQ(s.at(1.0), 1.0);
    EXPECT_DOUBLE_EQ(s.at(1.75), -0.5);
    EXPECT_DOUBLE_EQ(s.at(2.0), -1.0);
    EXPECT_DOUBLE_EQ(s.step(), 1.0);
    EXPECT_DOUBLE_EQ(s.max_increment(), 2.0);
}

TEST(SampledPath, RejectsMalformedInput) {
    EXPECT_THROW(SampledPath(1.0, 1, {0.0}), ValidationError);
    EXPECT_THROW(SampledPath(0.0, 1, {0.0, 1.0}), ValidationError);
    EXPECT_THROW(SampledPath(1.0, 2, {0.0, 1.0, 2.0}), ValidationError);
    EXPECT_THROW(SampledPath(1.0, 1, {0.0, std::nan("")}), ValidationError);
}

TEST(SampledPath, ProjectionAndCoordinates) {
    const SampledPath s(1.0, 2, {0.0, 0.0, 1.0, 2.0, 3.0, 5.0});
    const std::vector<double> v{2.0, -1.0};
    const SampledPath proj = s.project(v);
    EXPECT_DOUBLE_EQ(proj.value(1), 0.0);
    EXPECT_DOUBLE_EQ(proj.value(2), 1.0);
    EXPECT_DOUBLE_EQ(s.coordinate(1).value(2), 5.0);
}

TEST(Fbm, SameSeedGivesIdenticalSamples) {
    const auto a = fbm_path(0.5, 1024, 42);
    const auto b = fbm_path(0.5, 1024, 42);
    ASSERT_EQ(a.num_samples(), b.num_samples());
    for (std::size_t i = 0; i < a.num_samples(); ++i) ASSERT_EQ(a.value(i), b.value(i));
    const auto c = fbm_path(0.5, 1024, 43);
    EXPECT_NE(a.value(512), c.value(512));
}

TEST(Fbm, StartsAtZeroWithRequestedShape) {
    const auto s = fbm_path(0.3, 100, 1, 2.0, 3);
    EXPECT_EQ(s.num_samples(), 101u);
    EXPECT_EQ(s.dim(), 3u);
    EXPECT_DOUBLE_EQ(s.horizon(), 2.0);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(s.value(0, c), 0.0);
}

TEST(Fbm, RejectsBadParameters) {
    EXPECT_THROW(fbm_path(0.0, 16, 0), ValidationError);
    EXPECT_THROW(fbm_path(1.0, 16, 0), ValidationError);
    EXPECT_THROW(fbm_path(0.5, 0, 0), ValidationError);
}

TEST(Fbm, BrownianTerminalVarianceIsHorizon) {
    // 10^4 paths; Var B(1) = min(1, 1) = 1.
    double sum = 0.0, sq = 0.0;
    const int paths = 10000;
    for (int i = 0; i < paths; ++i) {
        const double x = fbm_path(0.5, 16, derive_seed(11, i)).value(16);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / paths;
    const double var = sq / paths - mean * mean;
    EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Fbm, BrownianDisjointIncrementsUncorrelated) {
    const int paths = 10000;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < paths; ++i) {
        const auto s = fbm_path(0.5, 8, derive_seed(5, i));
        const double x = s.value(4) - s.value(0);
        const double y = s.value(8) - s.value(4);
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 0.05);
}

TEST(Fbm, CholeskyAndCirculantShareTheCovariance) {
    // Sample covariance of (B(1/2), B(1)) for H = 0.3 under both methods
    // against (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
    const double H = 0.3;
    const double c_half = std::pow(0.5, 2 * H);
    const double expected = 0.5 * (c_half + 1.0 - c_half);
    for (FbmMethod m : {FbmMethod::circulant, FbmMethod::cholesky}) {
        double sxy = 0.0;
        const int paths = 20000;
        for (int i = 0; i < paths; ++i) {
            FbmOptions o;
            o.hurst = H;
            o.num_steps = 8;
            o.seed = derive_seed(9, i);
            o.method = m;
            const auto s = generate_fbm(o);
            sxy += s.value(4) * s.value(8);
        }
        EXPECT_NEAR(sxy / paths, expected, 0.03);
    }
}

TEST(Fbm, AutocovarianceClosedForm) {
    EXPECT_DOUBLE_EQ(fgn_autocovariance(0.5, 0), 1.0);
    EXPECT_NEAR(fgn_autocovariance(0.5, 3), 0.0, 1e-15);
    // 0.5 (2^{2H} - 2) at lag 1.
    EXPECT_NEAR(fgn_autocovariance(0.25, 1), 0.5 * (std::sqrt(2.0) - 2.0), 1e-15);
}

TEST(Fbm, QuarticVariationOfRoughFbm) {
    // sum |dB|^4 over the uniform grid, H = 1/4: mean 3 T.
    double total = 0.0;
    const int paths = 16;
    for (int i = 0; i < paths; ++i) {
        const auto s = fbm_path(0.25, 1 << 16, derive_seed(3, i));
        double q = 0.0;
        for (std::size_t j = 0; j + 1 < s.num_samples(); ++j) q += std::pow(s.value(j + 1) - s.value(j), 4);
        total += q;
    }
    EXPECT_NEAR(total / paths, 3.0, 0.3);
}

TEST(Analytic, Line) {
    const auto s = line_path(1.0, 2);
    EXPECT_EQ(s.num_samples(), 3u);
    EXPECT_DOUBLE_EQ(s.value(0), 0.0);
    EXPECT_DOUBLE_EQ(s.value(1), 0.5);
    EXPECT_DOUBLE_EQ(s.value(2), 1.0);
}

TEST(Analytic, SineQuarterPeriod) {
    const auto s = test::sine_path(4);
    EXPECT_DOUBLE_EQ(s.value(1), 1.0);
}

TEST(Analytic, WeierstrassAtZeroIsGeometricSum) {
    const auto s = generate_analytic(AnalyticKind::weierstrass, {{"a", 0.5}, {"b", 3.0}, {"terms", 20.0}}, 1.0, 10);
    EXPECT_NEAR(s.value(0), 2.0 * (1.0 - std::pow(0.5, 20)), 1e-12);
}

TEST(Analytic, Polynomial) {
    const auto s = generate_analytic(AnalyticKind::polynomial, {{"c0", 1.0}, {"c1", 0.0}, {"c2", 3.0}}, 2.0, 4);
    EXPECT_DOUBLE_EQ(s.value(4), 13.0);
    EXPECT_THROW(parse_analytic_kind("spiral"), ValidationError);
}

TEST(StepApprox, LineOnTwoIntervals) {
    const auto s = line_path(1.0, 8);
    const std::vector<double> pi{0.0, 0.5, 1.0};
    const StepPath step = piecewise_constant_approx(s, pi);
    EXPECT_DOUBLE_EQ(step.at(0.0), 0.5);
    EXPECT_DOUBLE_EQ(step.at(0.49), 0.5);
    EXPECT_DOUBLE_EQ(step.at(0.5), 1.0);
    EXPECT_DOUBLE_EQ(step.at(1.0), 1.0);
    EXPECT_DOUBLE_EQ(step.left_limit(0.5), 0.5);
}

TEST(StepApprox, TrivialPartitionIsTerminalValue) {
    const auto s = bm_path(64, 1);
    const std::vector<double> pi{0.0, 1.0};
    const StepPath step = piecewise_constant_approx(s, pi);
    EXPECT_DOUBLE_EQ(step.at(0.0), s.value(64));
    EXPECT_DOUBLE_EQ(step.at(0.7), s.value(64));
}

TEST(StepApprox, SupDistanceOfLineMatchesDenseGrid) {
    for (int n : {1, 3, 7, 16}) {
        const auto s = line_path(1.0, 256);
        std::vector<double> pi;
        for (int j = 0; j <= n; ++j) pi.push_back(static_cast<double>(j) / n);
        const StepPath step = piecewise_constant_approx(s, pi);
        double dense = 0.0;
        for (int i = 0; i <= 100000; ++i) {
            const double t = i / 100000.0;
            dense = std::max(dense, std::abs(step.at(t) - s.at(t)));
        }
        EXPECT_NEAR(sup_distance(step, s), dense, 1e-4);
        EXPECT_NEAR(sup_distance(step, s), 1.0 / n, 1e-12);
    }
}

TEST(StepApprox, SupDistanceBoundedByOscillation) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = bm_path(512, seed);
        for (int n = 0; n <= 6; ++n) {
            const Partition pi = uniform_dyadic(n, 1.0);
            const StepPath step = piecewise_constant_approx(s, pi.times());
            EXPECT_LE(sup_distance(step, s), oscillation(s, pi) + 1e-15);
        }
    }
}

}  // namespace
}  // namespace pathvar
