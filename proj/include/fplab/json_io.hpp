#pragma once

#include <json.hpp>

#include "fplab/bounds.hpp"
#include "fplab/decomposition.hpp"
#include "fplab/draws.hpp"
#include "fplab/rational.hpp"

// JSON shapes for result types.  Rationals appear as {num, den} integer
// pairs (decimal strings when they exceed 64 bits); key order is canonical
// because nlohmann::json sorts object keys.

namespace fplab {

nlohmann::json rational_to_json(const Rational& q);

nlohmann::json to_json(const CountingMeasureResult& result);
nlohmann::json to_json(const LemmaReport& report);
nlohmann::json to_json(const DecompositionReport& report);
nlohmann::json to_json(const GapEstimate& estimate);
nlohmann::json to_json(const ConditionalHalfResult& result);

} // namespace fplab
