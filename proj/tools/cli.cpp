#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "pathvar/calculus.hpp"
#include "pathvar/csv_io.hpp"
#include "pathvar/ensemble.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/functional.hpp"
#include "pathvar/functions.hpp"
#include "pathvar/json_io.hpp"
#include "pathvar/localtime.hpp"
#include "pathvar/partitions.hpp"
#include "pathvar/paths.hpp"
#include "pathvar/random.hpp"
#include "pathvar/roughpath.hpp"
#include "pathvar/variation.hpp"
#include "pathvar/version.hpp"

namespace pathvar::cli {

namespace {

struct Options {
    std::string command;
    std::string path;
    std::string gen;
    std::string out;
    std::string csv;
    int p = 0;
    std::string scheme;
    std::string levels;
    int level = -1;
    std::string times;
    double t = -1.0;
    std::string f;
    std::string functional;
    std::size_t ensemble = 1;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    double hurst = 0.5;
    double horizon = 1.0;
    std::size_t steps = 1024;
    std::size_t dim = 1;
    std::string method = "auto";
    std::string flavor = "raw";
    std::string lift = "samples";
    std::size_t triples = 256;
    double tol = 1e-12;
    double corrupt = 0.0;
    int depth = 12;
    std::size_t pairs = 0;
};

Json config_json(const Options& o) {
    Json j;
    j["command"] = o.command;
    if (!o.path.empty()) j["path"] = o.path;
    if (!o.gen.empty()) j["gen"] = o.gen;
    j["p"] = o.p;
    if (!o.scheme.empty()) j["scheme"] = o.scheme;
    if (!o.levels.empty()) j["levels"] = o.levels;
    if (o.level >= 0) j["level"] = o.level;
    if (!o.times.empty()) j["times"] = o.times;
    if (o.t >= 0.0) j["t"] = o.t;
    if (!o.f.empty()) j["f"] = o.f;
    if (!o.functional.empty()) j["functional"] = o.functional;
    j["ensemble"] = o.ensemble;
    j["seed"] = o.seed;
    if (o.command == "fbm" || o.command == "conjecture") {
        j["hurst"] = o.hurst;
        j["steps"] = o.steps;
    }
    if (o.command == "fbm") {
        j["horizon"] = o.horizon;
        j["dim"] = o.dim;
        j["method"] = o.method;
    }
    if (o.command == "localtime") j["flavor"] = o.flavor;
    if (o.command.rfind("roughpath", 0) == 0 || o.command == "equivalence") j["lift"] = o.lift;
    if (o.command == "roughpath-chen") {
        j["triples"] = o.triples;
        j["tol"] = o.tol;
        j["corrupt"] = o.corrupt;
    }
    if (o.command == "roughpath-integrate") {
        j["depth"] = o.depth;
        j["pairs"] = o.pairs;
    }
    return j;
}

std::pair<int, int> parse_levels(const std::string& spec, int default_lo, int default_hi) {
    if (spec.empty()) return {default_lo, default_hi};
    const auto colon = spec.find(':');
    try {
        std::size_t pos = 0;
        if (colon == std::string::npos) {
            const int n = std::stoi(spec, &pos);
            if (pos != spec.size()) throw std::invalid_argument(spec);
            return {n, n};
        }
        const std::string a = spec.substr(0, colon), b = spec.substr(colon + 1);
        const int lo = std::stoi(a, &pos);
        if (pos != a.size()) throw std::invalid_argument(spec);
        const int hi = std::stoi(b, &pos);
        if (pos != b.size()) throw std::invalid_argument(spec);
        if (lo < 0 || hi < lo || hi > 40) throw std::invalid_argument(spec);
        return {lo, hi};
    } catch (const std::exception&) {
        throw ValidationError("levels must be 'lo:hi' with 0 <= lo <= hi <= 40, got '" + spec + "'");
    }
}

std::vector<double> parse_times(const std::string& spec) {
    std::vector<double> out;
    if (spec.empty()) return out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("eval times must be a comma-separated list of numbers, got '" + spec + "'");
        }
    }
    return out;
}

SampledPath generate_from_spec(const std::string& spec, std::uint64_t seed) {
    const auto [name, params] = parse_spec(spec);
    std::map<std::string, double> kv(params.begin(), params.end());
    auto take = [&](const std::string& key, double fallback) {
        const auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        const double v = it->second;
        kv.erase(it);
        return v;
    };
    const double steps = take("steps", 1024);
    const double horizon = take("horizon", 1.0);
    if (!(steps >= 1.0) || steps != std::floor(steps)) throw ValidationError("steps must be a positive integer");
    if (name == "fbm") {
        FbmOptions o;
        o.hurst = take("hurst", 0.5);
        o.horizon = horizon;
        o.num_steps = static_cast<std::size_t>(steps);
        o.dim = static_cast<std::size_t>(take("dim", 1));
        o.seed = static_cast<std::uint64_t>(take("seed", static_cast<double>(seed)));
        if (!kv.empty()) throw ValidationError("unknown fbm generator parameter '" + kv.begin()->first + "'");
        return generate_fbm(o);
    }
    return generate_analytic(parse_analytic_kind(name), kv, horizon, static_cast<std::size_t>(steps));
}

// Input paths: one file, one generated path, or an fbm ensemble.
std::vector<SampledPath> load_paths(const Options& o) {
    if (o.path.empty() == o.gen.empty()) throw ValidationError("give exactly one of --path or --gen");
    if (o.ensemble == 0) throw ValidationError("--ensemble must be positive");
    if (!o.path.empty()) {
        if (o.ensemble != 1) throw ValidationError("--ensemble needs a generated path (--gen fbm:...)");
        return {read_path_csv(o.path)};
    }
    if (o.ensemble == 1) return {generate_from_spec(o.gen, o.seed)};
    if (o.gen.rfind("fbm", 0) != 0) throw ValidationError("--ensemble is only defined for fbm generators");
    const std::size_t threads = resolve_threads(o.threads);
    return run_ensemble<SampledPath>(o.ensemble, threads, [&](std::size_t i) {
        return generate_from_spec(o.gen, derive_seed(o.seed, i));
    });
}

Json for_each_path(const Options& o, const std::function<Json(const SampledPath&)>& fn) {
    const auto paths = load_paths(o);
    if (paths.size() == 1) return fn(paths.front());
    // Results are collected by index; the thread count does not change the output.
    auto results = run_ensemble<Json>(paths.size(), resolve_threads(o.threads),
                                      [&](std::size_t i) { return fn(paths[i]); });
    Json arr = Json::array();
    for (auto& r : results) arr.push_back(std::move(r));
    return {{"paths", paths.size()}, {"results", std::move(arr)}};
}

int even_p(const Options& o, int fallback) {
    const int p = o.p == 0 ? fallback : o.p;
    if (p < 2 || p % 2 != 0) throw ValidationError("--p must be an even integer >= 2");
    return p;
}

Scheme scheme_or(const Options& o, Scheme fallback) { return o.scheme.empty() ? fallback : parse_scheme(o.scheme); }

double time_or_horizon(const Options& o, const SampledPath& path) {
    if (o.t < 0.0) return path.horizon();
    if (o.t > path.horizon()) throw ValidationError("--t must lie in [0, T]");
    return o.t;
}

void emit(const Options& o, std::ostream& out, const Json& result) {
    const Json report = make_report(o.command, config_json(o), result);
    if (o.out.empty()) {
        out << report.dump(2) << '\n';
    } else {
        write_json(o.out, report);
    }
}

ReducedRoughPath make_lift(const Options& o, const SampledPath& path, int p) {
    if (o.lift == "samples") return canonical_lift_samples(path, p);
    if (o.lift == "zero") return zero_variation_lift(path, p);
    if (o.lift == "partition") {
        const int n = o.level >= 0 ? o.level : 12;
        const PartitionSequence seq{scheme_or(o, Scheme::uniform), n, n};
        return canonical_lift(path, seq.at(path, n), p);
    }
    throw ValidationError("--lift must be samples, partition or zero");
}

int cmd_fbm(const Options& o, std::ostream& out) {
    FbmOptions f;
    f.hurst = o.hurst;
    f.horizon = o.horizon;
    f.num_steps = o.steps;
    f.seed = o.seed;
    f.dim = o.dim;
    if (o.method == "auto") f.method = FbmMethod::automatic;
    else if (o.method == "circulant") f.method = FbmMethod::circulant;
    else if (o.method == "cholesky") f.method = FbmMethod::cholesky;
    else throw ValidationError("--method must be auto, circulant or cholesky");
    const SampledPath path = generate_fbm(f);
    if (o.out.empty()) write_path_csv(out, path);
    else write_path_csv(o.out, path);
    return 0;
}

int cmd_variation(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    const auto [lo, hi] = parse_levels(o.levels, 4, 10);
    const PartitionSequence seq{scheme_or(o, Scheme::uniform), lo, hi};
    const auto times = parse_times(o.times);
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             if (path.dim() == 1) {
                 const auto prof = pth_variation_scalar(path, seq, p, times);
                 Json j{{"profile", to_json(prof)}};
                 if (prof.levels.size() >= 2) j["convergence"] = to_json(convergence_diagnostic(prof));
                 return j;
             }
             const auto prof = pth_variation_tensor(path, seq, p, times);
             Json j{{"profile", to_json(prof)}};
             if (prof.levels.size() >= 2) j["convergence"] = to_json(convergence_diagnostic(prof));
             return j;
         }));
    return 0;
}

int cmd_oddp(const Options& o, std::ostream& out) {
    const int p = o.p == 0 ? 3 : o.p;
    const auto [lo, hi] = parse_levels(o.levels, 6, 10);
    const PartitionSequence seq{scheme_or(o, Scheme::lebesgue), lo, hi};
    const auto times = parse_times(o.times);
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             return {{"profile", to_json(signed_pth_sums(path, seq, p, times))}};
         }));
    return 0;
}

int cmd_integrate(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    const auto [lo, hi] = parse_levels(o.levels, 4, 10);
    const PartitionSequence seq{scheme_or(o, Scheme::uniform), lo, hi};
    const auto times = parse_times(o.times);
    const FunctionPtr f = parse_function(o.f.empty() ? "square" : o.f, p - 1);
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             if (f->max_order() >= p) return to_json(change_of_variable_residual(*f, path, seq, p, times));
             return to_json(compensated_integral(*f, path, seq, p, times));
         }));
    return 0;
}

CylindricalFunctional functional_of(const Options& o) {
    return parse_functional(o.functional.empty() ? "square" : o.functional);
}

int cmd_functional(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    const auto [lo, hi] = parse_levels(o.levels, 4, 10);
    const PartitionSequence seq{scheme_or(o, Scheme::uniform), lo, hi};
    const auto times = parse_times(o.times);
    const auto F = functional_of(o);
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             return to_json(functional_change_of_variable_residual(F, path, seq, p, times));
         }));
    return 0;
}

int cmd_isometry(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    const auto [lo, hi] = parse_levels(o.levels, 4, 10);
    const PartitionSequence seq{scheme_or(o, Scheme::uniform), lo, hi};
    const auto times = parse_times(o.times);
    const auto F = functional_of(o);
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             return to_json(isometry_check(F, path, seq, p, times));
         }));
    return 0;
}

int cmd_decompose(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    const auto [lo, hi] = parse_levels(o.levels, 4, 10);
    const PartitionSequence seq{scheme_or(o, Scheme::uniform), lo, hi};
    const auto times = parse_times(o.times);
    const auto F = functional_of(o);
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             return to_json(rough_smooth_decompose(F, path, seq, p, times));
         }));
    return 0;
}

int cmd_localtime(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    const int n = o.level >= 0 ? o.level : 8;
    const Scheme scheme = scheme_or(o, Scheme::lebesgue);
    if (o.flavor != "raw" && o.flavor != "upcrossing" && o.flavor != "occupation")
        throw ValidationError("--flavor must be raw, upcrossing or occupation");
    if (!o.csv.empty() && o.ensemble != 1) throw ValidationError("--csv needs a single path");
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             const double t = time_or_horizon(o, path);
             const SpatialGrid grid = SpatialGrid::for_path(path, n);
             const Partition part = scheme == Scheme::lebesgue ? lebesgue_dyadic(path, n) : uniform_dyadic(n, path.horizon());
             const auto raw = local_time_raw(path, part, p, t, grid);
             const auto occ = occupation_density(path, t, n, grid);
             std::optional<LocalTimeGrid> tilde;
             Json j{{"raw", to_json(raw)}, {"occupation", to_json(occ)}};
             if (scheme == Scheme::lebesgue) {
                 tilde = local_time_upcrossing(path, n, p, t, grid);
                 j["upcrossing"] = to_json(*tilde);
                 j["consistency"] = to_json(upcrossing_consistency(path, n, p, t, grid));
             }
             const double lo_v = path.min_value(), hi_v = path.max_value();
             const double scale = hi_v > lo_v ? 0.5 * (hi_v - lo_v) : std::ldexp(1.0, -n);
             Json pairings = Json::array();
             const double moment = gaussian_abs_moment(p);
             for (const auto& tf : test_panel(0.5 * (lo_v + hi_v), scale)) {
                 Json row{{"test_function", tf.name}, {"raw", weak_pairing(raw, tf.g)},
                          {"occupation", weak_pairing(occ, tf.g)}};
                 if (tilde) row["scaled_upcrossing"] = 2.0 / moment * weak_pairing(*tilde, tf.g);
                 pairings.push_back(std::move(row));
             }
             j["pairings"] = pairings;
             if (!o.csv.empty()) {
                 std::ofstream csv(o.csv);
                 if (!csv) throw ValidationError("cannot write " + o.csv);
                 if (o.flavor == "raw") write_local_time_csv(csv, raw);
                 else if (o.flavor == "occupation") write_local_time_csv(csv, occ);
                 else if (tilde) write_local_time_csv(csv, *tilde);
                 else throw ValidationError("the upcrossing flavor needs the Lebesgue scheme");
             }
             return j;
         }));
    return 0;
}

int cmd_tanaka(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    const int dflt = o.level >= 0 ? o.level : 10;
    const auto [lo, hi] = o.levels.empty() ? std::pair{dflt, dflt} : parse_levels(o.levels, dflt, dflt);
    const PartitionSequence seq{scheme_or(o, Scheme::uniform), lo, hi};
    const FunctionPtr f = parse_function(o.f.empty() ? "ramp:a=0" : o.f, p - 1);
    const auto paths = load_paths(o);
    Json results = Json::array();
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& path = paths[i];
        const double t = time_or_horizon(o, path);
        for (int n : seq.levels()) {
            const TanakaResult r = tanaka_residual(*f, path, seq.at(path, n), p, t);
            if (paths.size() > 1) out << "path " << i << ' ';
            out << "level " << n << " t " << t << " residual " << r.residual << '\n';
            Json row = to_json(r);
            row["path"] = i;
            row["n"] = n;
            row["t"] = t;
            results.push_back(std::move(row));
        }
    }
    if (!o.out.empty()) write_json(o.out, make_report(o.command, config_json(o), {{"function", f->id()}, {"results", results}}));
    return 0;
}

int cmd_conjecture(const Options& o, std::ostream& out) {
    const auto [lo, hi] = parse_levels(o.levels, 6, 10);
    ConjectureReport report;
    if (!o.path.empty() || !o.gen.empty()) {
        Options single = o;
        const auto paths = load_paths(single);
        report = conjecture_on_paths(paths, o.hurst, lo, hi, resolve_threads(o.threads));
    } else {
        ConjectureOptions c;
        c.hurst = o.hurst;
        c.ensemble = o.ensemble == 1 ? 64 : o.ensemble;
        c.num_steps = o.steps;
        c.seed = o.seed;
        c.first_level = lo;
        c.last_level = hi;
        c.threads = o.threads;
        report = conjecture_experiment(c);
    }
    emit(o, out, to_json(report));
    return 0;
}

int cmd_roughpath_chen(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             const ReducedRoughPath X = make_lift(o, path, p);
             const auto triples = grid_triples(path, o.triples, o.seed);
             ChenReport r;
             if (o.corrupt != 0.0) {
                 // Negative control: shift the top level by a constant.
                 const double c = o.corrupt;
                 r = check_reduced_chen(
                     [&X, c](double s, double t) {
                         auto lv = X.levels(s, t);
                         lv.back()[0] += c;
                         return lv;
                     },
                     X.dim(), p, triples, o.tol);
             } else {
                 r = check_reduced_chen(X, triples, o.tol);
             }
             return to_json(r);
         }));
    return 0;
}

int cmd_roughpath_integrate(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    if (o.depth < 0 || o.depth > 20) throw ValidationError("--depth must lie in [0, 20]");
    const FunctionPtr f = parse_function(o.f.empty() ? "square" : o.f, p);
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             const ReducedRoughPath X = make_lift(o, path, p);
             const ControlledPath Y = controlled_from_function(f, path, p);
             Json j{{"function", f->id()}, {"integral", to_json(rough_integral(Y, X, time_or_horizon(o, path), o.depth))}};
             if (o.pairs > 0) {
                 const auto pairs = grid_pairs(path, o.pairs, o.seed);
                 j["remainders"] = to_json(controlled_remainders(Y, X, pairs, linear_control()));
                 j["remainder_control"] = "linear";
             }
             return j;
         }));
    return 0;
}

int cmd_equivalence(const Options& o, std::ostream& out) {
    const int p = even_p(o, 2);
    const auto [lo, hi] = parse_levels(o.levels, 4, 10);
    const PartitionSequence seq{scheme_or(o, Scheme::uniform), lo, hi};
    const FunctionPtr f = parse_function(o.f.empty() ? "square" : o.f, p);
    emit(o, out, for_each_path(o, [&](const SampledPath& path) -> Json {
             const ReducedRoughPath X = make_lift(o, path, p);
             return to_json(integral_equivalence_check(f, path, X, seq, time_or_horizon(o, path)));
         }));
    return 0;
}

void add_path_options(CLI::App* sub, Options& o) {
    sub->add_option("--path", o.path, "Input path CSV (t,x1..xd)");
    sub->add_option("--gen", o.gen, "Generated path, e.g. fbm:hurst=0.25,steps=65536 or sine:frequency=1");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--ensemble", o.ensemble, "Number of generated fbm paths");
    sub->add_option("--threads", o.threads, "Worker threads (default: PATHVAR_THREADS or hardware)");
    sub->add_option("--out", o.out, "Output file (default: stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Pathwise calculus along partition sequences", "pathvar"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    auto* fbm = app.add_subcommand("fbm", "Generate fractional Brownian motion as CSV");
    fbm->add_option("--hurst", o.hurst, "Hurst index in (0, 1)");
    fbm->add_option("--steps", o.steps, "Number of steps");
    fbm->add_option("--horizon", o.horizon, "Time horizon T");
    fbm->add_option("--dim", o.dim, "Number of independent coordinates");
    fbm->add_option("--seed", o.seed, "Seed");
    fbm->add_option("--method", o.method, "auto, circulant or cholesky");
    fbm->add_option("--out", o.out, "Output CSV (default: stdout)");

    auto* variation = app.add_subcommand("variation", "p-th variation along a partition sequence");
    auto* oddp = app.add_subcommand("oddp", "Signed sums for odd p along Lebesgue partitions");
    auto* integrate = app.add_subcommand("integrate", "Compensated Riemann sums and change of variable residuals");
    auto* functional = app.add_subcommand("functional", "Functional change of variable residuals");
    auto* isometry = app.add_subcommand("isometry", "Isometry of the functional integral");
    auto* decompose = app.add_subcommand("decompose", "Rough-smooth decomposition of a functional");
    auto* localtime = app.add_subcommand("localtime", "Order-p local times and occupation density");
    auto* tanaka = app.add_subcommand("tanaka", "Pathwise Tanaka residual");
    auto* conjecture = app.add_subcommand("conjecture", "Upcrossing local time against occupation density for fBm");
    auto* chen = app.add_subcommand("roughpath-chen", "Reduced Chen relation of the canonical lift");
    auto* rintegrate = app.add_subcommand("roughpath-integrate", "Sewing integral of a controlled path");
    auto* equivalence = app.add_subcommand("equivalence", "Rough integral against compensated Riemann sums");

    for (auto* sub : {variation, oddp, integrate, functional, isometry, decompose, localtime, tanaka, chen, rintegrate,
                      equivalence}) {
        add_path_options(sub, o);
        sub->add_option("--p", o.p, "Variation order");
    }
    for (auto* sub : {variation, oddp, integrate, functional, isometry, decompose, tanaka, equivalence}) {
        sub->add_option("--scheme", o.scheme, "Partition scheme: uniform or lebesgue");
        sub->add_option("--levels", o.levels, "Dyadic levels lo:hi (inclusive)");
    }
    for (auto* sub : {variation, oddp, integrate, functional, isometry, decompose})
        sub->add_option("--times", o.times, "Evaluation times, comma-separated");
    for (auto* sub : {integrate, tanaka, rintegrate, equivalence})
        sub->add_option("--f", o.f, "Function spec, e.g. cos, monomial:m=3, ramp:a=0");
    for (auto* sub : {functional, isometry, decompose})
        sub->add_option("--functional", o.functional, "identity, square, integral, time_value or fn:<spec>");
    for (auto* sub : {localtime, tanaka, chen}) sub->add_option("--level", o.level, "Dyadic level n");
    for (auto* sub : {localtime, tanaka, rintegrate, equivalence}) sub->add_option("--t", o.t, "Time t (default T)");
    localtime->add_option("--scheme", o.scheme, "Partition scheme for the raw local time (default lebesgue)");
    localtime->add_option("--flavor", o.flavor, "Flavor written to --csv: raw, upcrossing or occupation");
    localtime->add_option("--csv", o.csv, "Write x,L for the chosen flavor");

    conjecture->add_option("--hurst", o.hurst, "Hurst index with 1/H even");
    conjecture->add_option("--steps", o.steps, "Steps per path");
    conjecture->add_option("--levels", o.levels, "Dyadic levels lo:hi");
    conjecture->add_option("--path", o.path, "Use this path instead of an ensemble");
    conjecture->add_option("--gen", o.gen, "Use this generated path instead of an ensemble");
    conjecture->add_option("--ensemble", o.ensemble, "Ensemble size (default 64)");
    conjecture->add_option("--seed", o.seed, "Master seed");
    conjecture->add_option("--threads", o.threads, "Worker threads");
    conjecture->add_option("--out", o.out, "Output JSON (default: stdout)");

    for (auto* sub : {chen, rintegrate, equivalence})
        sub->add_option("--lift", o.lift, "Variation in the top level: samples, partition or zero");
    chen->add_option("--scheme", o.scheme, "Scheme of the lift partition (with --lift partition)");
    chen->add_option("--triples", o.triples, "Number of random triples");
    chen->add_option("--tol", o.tol, "Relative tolerance");
    chen->add_option("--corrupt", o.corrupt, "Add a constant to the top level (negative control)");
    rintegrate->add_option("--depth", o.depth, "Deepest dyadic refinement");
    rintegrate->add_option("--pairs", o.pairs, "Random pairs for the remainder report (0 = skip)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const auto subs = app.get_subcommands();
    o.command = subs.front()->get_name();
    try {
        if (o.command == "fbm") return cmd_fbm(o, out);
        if (o.command == "variation") return cmd_variation(o, out);
        if (o.command == "oddp") return cmd_oddp(o, out);
        if (o.command == "integrate") return cmd_integrate(o, out);
        if (o.command == "functional") return cmd_functional(o, out);
        if (o.command == "isometry") return cmd_isometry(o, out);
        if (o.command == "decompose") return cmd_decompose(o, out);
        if (o.command == "localtime") return cmd_localtime(o, out);
        if (o.command == "tanaka") return cmd_tanaka(o, out);
        if (o.command == "conjecture") return cmd_conjecture(o, out);
        if (o.command == "roughpath-chen") return cmd_roughpath_chen(o, out);
        if (o.command == "roughpath-integrate") return cmd_roughpath_integrate(o, out);
        if (o.command == "equivalence") return cmd_equivalence(o, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: unknown command\n";
    return 2;
}

}  // namespace pathvar::cli
