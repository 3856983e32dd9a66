#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "marketeq/config.hpp"

namespace marketeq {

/// One-shot reproduction battery for the counterexample family: the
/// anti-MHR star witness, the no-equilibrium instance, the condition
/// boundary, and the condition-violated instance. Assertions are backed by
/// this toolkit's own quadrature oracles; literature values that disagree
/// with the oracles become warnings, never silent.
struct AppendixItem {
    std::string name;
    bool pass = true;
    std::vector<std::string> checks;    // satisfied oracle assertions
    std::vector<std::string> failures;  // violated oracle assertions
    std::vector<std::string> warnings;  // annotation mismatches, known typos
    nlohmann::json values;
};

struct AppendixReport {
    bool all_pass = true;
    std::vector<AppendixItem> items;

    nlohmann::json to_json() const;
};

AppendixReport run_appendix_verification(const NumericConfig& cfg);

}  // namespace marketeq
