#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pathvar/calculus.hpp"
#include "pathvar/functional.hpp"
#include "pathvar/localtime.hpp"
#include "pathvar/roughpath.hpp"
#include "pathvar/tensors.hpp"
#include "pathvar/variation.hpp"

namespace pathvar {

using Json = nlohmann::ordered_json;

/// {"order", "dim", "coefficients": {"a1.a2...": value}}.
Json to_json(const SymTensor& t);
Json to_json(const VariationProfile& profile);
Json to_json(const TensorVariationProfile& profile);
Json to_json(const ConvergenceReport& report);
Json to_json(const IntegralProfile& profile);
Json to_json(const IsometryReport& report);
Json to_json(const DecompositionReport& report);
/// Metadata and summary; values are written separately as CSV.
Json to_json(const LocalTimeGrid& lt);
Json to_json(const UpcrossingConsistency& c);
Json to_json(const TanakaResult& r);
Json to_json(const ConjectureReport& report);
Json to_json(const ChenReport& report);
Json to_json(const RemainderReport& report);
Json to_json(const RoughIntegralReport& report);
Json to_json(const EquivalenceReport& report);

/// {"tool", "version", "command", "config", "result", "timestamp"}.
Json make_report(const std::string& command, Json config, Json result);

/// The report without its timestamp; identical configs give identical bodies.
Json hashable_body(Json report);

void write_json(const std::string& file, const Json& j);

}  // namespace pathvar
