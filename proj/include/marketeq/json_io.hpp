#pragma once

#include <json.hpp>

#include "marketeq/distribution.hpp"
#include "marketeq/equilibrium.hpp"
#include "marketeq/montecarlo.hpp"
#include "marketeq/policy.hpp"

namespace marketeq {

// nlohmann::json objects keep keys sorted, which is the stable order the
// machine-readable outputs promise.
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const Classification& c, const std::string& dist_spec);
nlohmann::json to_json(const MhrCheck& m);
nlohmann::json to_json(const EquilibriumReport& r);
nlohmann::json to_json(const PolicyComparison& p);
nlohmann::json to_json(const SimResult& r);
nlohmann::json to_json(const FixedPointResult& r);

}  // namespace marketeq
