#include "pathvar/json_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "pathvar/errors.hpp"
#include "pathvar/version.hpp"

namespace pathvar {

namespace {

template <typename T>
Json array_of(const std::vector<T>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(to_json(x));
    return a;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

Json to_json(const SymTensor& t) {
    Json coeffs = Json::object();
    const auto& set = t.indices();
    for (std::size_t i = 0; i < t.size(); ++i) coeffs[multi_index_key(set.alpha(i))] = t[i];
    return {{"order", t.order()}, {"dim", t.dim()}, {"coefficients", coeffs}};
}

Json to_json(const VariationProfile& profile) {
    Json levels = Json::array();
    for (const auto& l : profile.levels) {
        Json j{{"n", l.n}, {"intervals", l.intervals}, {"oscillation", l.oscillation}, {"max_term", l.max_term},
               {"values", l.values}};
        if (profile.signed_sums) j["bounds"] = l.bounds;
        levels.push_back(std::move(j));
    }
    return {{"p", profile.p},
            {"scheme", to_string(profile.scheme)},
            {"signed", profile.signed_sums},
            {"eval_times", profile.eval_times},
            {"levels", levels}};
}

Json to_json(const TensorVariationProfile& profile) {
    Json levels = Json::array();
    for (const auto& l : profile.levels)
        levels.push_back({{"n", l.n}, {"intervals", l.intervals}, {"oscillation", l.oscillation},
                          {"values", array_of(l.values)}});
    return {{"p", profile.p},
            {"dim", profile.dim},
            {"scheme", to_string(profile.scheme)},
            {"eval_times", profile.eval_times},
            {"levels", levels}};
}

Json to_json(const ConvergenceReport& report) {
    Json pairs = Json::array();
    for (std::size_t i = 0; i < report.pairs.size(); ++i)
        pairs.push_back({{"from", report.pairs[i].first}, {"to", report.pairs[i].second}, {"sup_diff", report.cauchy[i]}});
    return {{"cauchy", pairs},
            {"limit", report.limit},
            {"max_jump", report.max_jump},
            {"first_max_term", report.first_max_term},
            {"last_max_term", report.last_max_term},
            {"atomless", report.atomless}};
}

Json to_json(const IntegralProfile& profile) {
    Json levels = Json::array();
    for (const auto& l : profile.levels) {
        Json j{{"n", l.n}, {"intervals", l.intervals}, {"values", l.values}};
        if (!l.stieltjes.empty()) j["stieltjes"] = l.stieltjes;
        if (!l.residuals.empty()) j["residuals"] = l.residuals;
        levels.push_back(std::move(j));
    }
    Json j{{"function", profile.function_id},
           {"p", profile.p},
           {"scheme", to_string(profile.scheme)},
           {"eval_times", profile.eval_times},
           {"lhs", profile.lhs}};
    if (!profile.drift.empty()) j["drift"] = profile.drift;
    j["levels"] = levels;
    j["warnings"] = profile.warnings;
    return j;
}

Json to_json(const IsometryReport& report) {
    Json levels = Json::array();
    for (const auto& l : report.levels) levels.push_back({{"n", l.n}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"gap", l.gap}});
    return {{"functional", report.functional_id},
            {"p", report.p},
            {"scheme", to_string(report.scheme)},
            {"eval_times", report.eval_times},
            {"holder_threshold", report.holder_threshold},
            {"levels", levels},
            {"warnings", report.warnings}};
}

Json to_json(const DecompositionReport& report) {
    Json levels = Json::array();
    for (const auto& l : report.levels)
        levels.push_back({{"n", l.n}, {"M", l.M}, {"A", l.A}, {"A_variation", l.A_variation}});
    return {{"functional", report.functional_id},
            {"p", report.p},
            {"scheme", to_string(report.scheme)},
            {"eval_times", report.eval_times},
            {"levels", levels},
            {"min_increment_first", report.min_increment_first},
            {"min_increment_last", report.min_increment_last},
            {"decay_rate", report.decay_rate},
            {"strictly_increasing", report.strictly_increasing},
            {"warnings", report.warnings}};
}

Json to_json(const LocalTimeGrid& lt) {
    double peak = 0.0;
    for (double v : lt.values) peak = std::max(peak, v);
    return {{"flavor", to_string(lt.flavor)},
            {"level", lt.level},
            {"t", lt.t},
            {"p", lt.p},
            {"grid", {{"origin", lt.grid.origin}, {"spacing", lt.grid.spacing}, {"size", lt.grid.size}}},
            {"integral", lt.integral()},
            {"max", peak},
            {"degenerate", lt.degenerate},
            {"warnings", lt.warnings}};
}

Json to_json(const UpcrossingConsistency& c) {
    return {{"max_gap", c.max_gap}, {"bound", c.bound}, {"max_crossings", c.max_crossings}, {"holds", c.holds}};
}

Json to_json(const TanakaResult& r) {
    return {{"lhs", r.lhs}, {"compensated", r.compensated}, {"local_time_term", r.local_time_term},
            {"residual", r.residual}};
}

Json to_json(const ConjectureReport& report) {
    Json levels = Json::array();
    for (const auto& l : report.levels)
        levels.push_back({{"n", l.n},
                          {"median_sup_gap", l.median_sup_gap},
                          {"median_mu_ratio", l.median_mu_ratio},
                          {"mu_gap", l.mu_gap},
                          {"sup_gaps", l.sup_gaps},
                          {"mu_ratios", l.mu_ratios}});
    return {{"hurst", report.hurst},
            {"p", report.p},
            {"moment", report.moment},
            {"horizon", report.horizon},
            {"num_steps", report.num_steps},
            {"ensemble", report.ensemble},
            {"seed", report.seed},
            {"levels", levels},
            {"sup_gap_decreasing", report.sup_gap_decreasing},
            {"degenerate_paths", report.degenerate_paths},
            {"warnings", report.warnings}};
}

Json to_json(const ChenReport& report) {
    return {{"level_defects", report.level_defects}, {"max_defect", report.max_defect},
            {"max_relative", report.max_relative},   {"tol", report.tol},
            {"triples", report.triples},             {"passed", report.passed}};
}

Json to_json(const RemainderReport& report) {
    return {{"order", report.order},         {"p", report.p},
            {"pairs", report.pairs},         {"exponents", report.exponents},
            {"max_remainder", report.max_remainder}, {"max_ratio", report.max_ratio}};
}

Json to_json(const RoughIntegralReport& report) {
    return {{"t", report.t},           {"p", report.p},           {"exponent", report.exponent},
            {"depths", report.depths}, {"values", report.values}, {"cauchy", report.cauchy},
            {"value", report.value}};
}

Json to_json(const EquivalenceReport& report) {
    Json levels = Json::array();
    for (const auto& l : report.levels)
        levels.push_back({{"n", l.n}, {"rough", l.rough}, {"compensated", l.compensated}, {"gap", l.gap}});
    return {{"function", report.function_id}, {"p", report.p}, {"t", report.t}, {"levels", levels},
            {"gap_ratios", report.gap_ratios}};
}

Json make_report(const std::string& command, Json config, Json result) {
    return {{"tool", "pathvar"},
            {"version", kVersion},
            {"command", command},
            {"config", std::move(config)},
            {"result", std::move(result)},
            {"timestamp", utc_timestamp()}};
}

Json hashable_body(Json report) {
    report.erase("timestamp");
    return report;
}

void write_json(const std::string& file, const Json& j) {
    std::ofstream out(file);
    if (!out) throw ValidationError("cannot write " + file);
    out << j.dump(2) << '\n';
}

}  // namespace pathvar
