#pragma once

#include <optional>
#include <string>
#include <vector>

#include "marketeq/config.hpp"
#include "marketeq/distribution.hpp"
#include "marketeq/equilibrium.hpp"

namespace marketeq {

struct MarketInstance {
    std::vector<Distribution> marginals;  // one per provider
    double cost = 0.0;                    // per-consumer provider cost
    std::optional<Distribution> base_value;

    int n() const { return static_cast<int>(marginals.size()); }
    bool symmetric() const;

    static MarketInstance symmetric_market(const Distribution& d, int n, double cost = 0.0,
                                           std::optional<Distribution> base_value = std::nullopt);
};

struct LimitEntryCondition {
    double lhs = 0.0;  // H_1^n
    double rhs = 0.0;  // n / h_2^n
    bool satisfied = false;
};

LimitEntryCondition limit_entry_condition(const Distribution& d, int n, const NumericConfig& cfg);

struct PolicyComparison {
    std::string dist_spec;
    int n = 0;
    double cost = 0.0;
    double base_value_mean = 0.0;
    double v1n = 0.0;
    double v1n_minus_1 = 0.0;
    double v2n = 0.0;
    double h2n = 0.0;
    double H1n = 0.0;
    double utility_free = 0.0;     // V_1^n - 1/h_2^n - cost + E[w0]
    double utility_limited = 0.0;  // V_1^{n-1} - cost + E[w0]
    double limit_entry_lhs = 0.0;
    double limit_entry_rhs = 0.0;
    bool condition_satisfied = false;
    bool utilities_consistent = false;
    std::string free_market_equilibrium_exists;  // verdict string
};

/// Full utility comparison for a symmetric instance. Cost lowers both
/// utilities by the same amount and a common base value raises both by
/// E[w0]; neither moves the verdicts.
PolicyComparison compare_policies(const MarketInstance& m, const NumericConfig& cfg);

enum class SufficiencyVerdict { Pass, Fail, NotApplicable };

std::string to_string(SufficiencyVerdict v);

/// When the marginal is MHR with decreasing density the Limit-Entry
/// condition must hold; NotApplicable when the classification premise fails.
SufficiencyVerdict mhr_sufficiency_check(const Distribution& d, int n, const NumericConfig& cfg);

/// Shifts every price in a zero-cost symmetric report by the instance cost.
/// Provider payoffs are unchanged.
EquilibriumReport apply_cost(const MarketInstance& m, EquilibriumReport report);

/// Adds E[w0] to both utilities; prices, condition and verdicts unchanged.
PolicyComparison apply_base_value(const MarketInstance& m, PolicyComparison comparison,
                                  const NumericConfig& cfg);

}  // namespace marketeq
