#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fixtures.hpp"
#include "pathvar/csv_io.hpp"
#include "pathvar/ensemble.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/json_io.hpp"
#include "pathvar/random.hpp"

namespace pathvar {
namespace {

TEST(PathCsv, RoundTripIsBitExact) {
    const auto s = test::fbm_path(0.3, 500, 111, 2.5, 2);
    std::stringstream buf;
    write_path_csv(buf, s);
    const SampledPath back = read_path_csv(buf);
    ASSERT_EQ(back.num_samples(), s.num_samples());
    ASSERT_EQ(back.dim(), 2u);
    EXPECT_DOUBLE_EQ(back.horizon(), 2.5);
    for (std::size_t i = 0; i < s.values().size(); ++i) ASSERT_EQ(back.values()[i], s.values()[i]);
}

TEST(PathCsv, HeaderAndRows) {
    std::stringstream buf;
    write_path_csv(buf, test::line_path(1.0, 2));
    EXPECT_EQ(buf.str(), "t,x1\n0,0\n0.5,0.5\n1,1\n");
}

TEST(PathCsv, RejectsMalformedInput) {
    const char* bad[] = {
        "",                         // empty
        "time,x1\n0,0\n1,1\n",      // header
        "t,x1\n0,0\n",              // single row
        "t,x1\n0,0\n1,1,2\n",       // ragged
        "t,x1\n0,0\n0.5,abc\n",     // not a number
        "t,x1\n0,0\n0.5,1\n1.2,2\n",  // non-uniform grid
        "t,x1\n0.1,0\n0.5,1\n",     // does not start at 0
    };
    for (const char* text : bad) {
        std::stringstream in(text);
        EXPECT_THROW(read_path_csv(in), ValidationError) << text;
    }
    EXPECT_THROW(read_path_csv(std::string("/nonexistent/path.csv")), ValidationError);
}

TEST(PartitionCsv, RoundTrip) {
    const std::vector<double> t{0.0, 0.125, 0.7, 1.0};
    std::stringstream buf;
    write_partition_csv(buf, t);
    EXPECT_EQ(read_partition_csv(buf), t);
    std::stringstream bad("t\n0\n0.5\n0.4\n");
    EXPECT_THROW(read_partition_csv(bad), ValidationError);
}

TEST(LocalTimeCsv, Columns) {
    LocalTimeGrid lt;
    lt.grid = {0.0, 0.5, 2};
    lt.values = {1.0, 2.0};
    std::stringstream buf;
    write_local_time_csv(buf, lt);
    EXPECT_EQ(buf.str(), "x,L\n0.25,1\n0.75,2\n");
}

TEST(Json, SymTensorKeys) {
    SymTensor t(2, 2, {1.0, 2.0, 3.0});
    const Json j = to_json(t);
    EXPECT_EQ(j["order"], 2);
    EXPECT_EQ(j["dim"], 2);
    EXPECT_EQ(j["coefficients"]["2.0"], 1.0);
    EXPECT_EQ(j["coefficients"]["1.1"], 2.0);
    EXPECT_EQ(j["coefficients"]["0.2"], 3.0);
}

TEST(Json, ReportEnvelopeAndHashableBody) {
    const Json a = make_report("variation", {{"p", 2}}, {{"x", 1}});
    for (const char* key : {"tool", "version", "command", "config", "result", "timestamp"}) EXPECT_TRUE(a.contains(key));
    const Json body = hashable_body(a);
    EXPECT_FALSE(body.contains("timestamp"));
    EXPECT_EQ(body.dump(), hashable_body(make_report("variation", {{"p", 2}}, {{"x", 1}})).dump());
}

TEST(Json, VariationProfileStructure) {
    const auto s = test::bm_path(256, 112);
    const auto prof = pth_variation_scalar(s, {Scheme::uniform, 2, 4}, 2, std::vector<double>{0.5, 1.0});
    const Json j = to_json(prof);
    EXPECT_EQ(j["p"], 2);
    EXPECT_EQ(j["scheme"], "uniform");
    ASSERT_EQ(j["levels"].size(), 3u);
    EXPECT_EQ(j["levels"][0]["n"], 2);
    EXPECT_EQ(j["levels"][2]["values"].size(), 2u);
}

TEST(Ensemble, SeedsAreStable) {
    EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
    EXPECT_NE(derive_seed(7, 3), derive_seed(7, 4));
    EXPECT_NE(derive_seed(7, 3), derive_seed(8, 3));
}

TEST(Ensemble, ResultsDoNotDependOnThreadCount) {
    const auto fn = [](std::size_t i) { return test::bm_path(128, derive_seed(5, i)).value(128); };
    const auto one = run_ensemble<double>(20, 1, fn);
    const auto four = run_ensemble<double>(20, 4, fn);
    EXPECT_EQ(one, four);
}

TEST(Ensemble, ParallelForVisitsEveryIndexAndRethrows) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 3, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(10, 2,
                              [](std::size_t i) {
                                  if (i == 7) throw NumericalError("boom");
                              }),
                 NumericalError);
}

TEST(Ensemble, ThreadResolution) {
    EXPECT_EQ(resolve_threads(3), 3u);
    ::setenv("PATHVAR_THREADS", "2", 1);
    EXPECT_EQ(resolve_threads(0), 2u);
    ::setenv("PATHVAR_THREADS", "many", 1);
    EXPECT_THROW(resolve_threads(0), ValidationError);
    ::unsetenv("PATHVAR_THREADS");
    EXPECT_GE(resolve_threads(0), 1u);
}

TEST(Ensemble, Median) {
    EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
    EXPECT_TRUE(std::isnan(median({})));
}

}  // namespace
}  // namespace pathvar
