#include "marketeq/policy.hpp"

#include <cmath>

#include "marketeq/order_statistics.hpp"

namespace marketeq {

bool MarketInstance::symmetric() const {
    for (const Distribution& d : marginals)
        if (!d.same_as(marginals.front())) return false;
    return true;
}

MarketInstance MarketInstance::symmetric_market(const Distribution& d, int n, double cost,
                                                std::optional<Distribution> base_value) {
    if (n < 2) throw InvalidParameterError("market instance requires n >= 2");
    if (!(cost >= 0.0)) throw InvalidParameterError("market instance requires cost >= 0");
    MarketInstance m;
    m.marginals.assign(static_cast<std::size_t>(n), d);
    m.cost = cost;
    m.base_value = std::move(base_value);
    return m;
}

LimitEntryCondition limit_entry_condition(const Distribution& d, int n, const NumericConfig& cfg) {
    if (n < 2) throw InvalidParameterError("limit entry condition requires n >= 2");
    LimitEntryCondition out;
    out.lhs = expected_inverse_hazard_order({d, 1, n}, cfg);
    out.rhs = n / expected_hazard_order({d, 2, n}, cfg);
    out.satisfied = out.lhs <= out.rhs + 1e-9;
    return out;
}

PolicyComparison compare_policies(const MarketInstance& m, const NumericConfig& cfg) {
    if (m.n() < 2) throw InvalidParameterError("compare_policies requires n >= 2");
    if (!m.symmetric())
        throw InvalidParameterError("compare_policies is defined for symmetric instances only");

    const Distribution& d = m.marginals.front();
    const int n = m.n();
    PolicyComparison out;
    out.dist_spec = d.spec();
    out.n = n;
    out.cost = m.cost;

    out.v1n = expected_order_stat({d, 1, n}, cfg);
    out.v1n_minus_1 = expected_order_stat({d, 1, n - 1}, cfg);
    out.v2n = expected_order_stat({d, 2, n}, cfg);
    out.h2n = expected_hazard_order({d, 2, n}, cfg);
    out.H1n = expected_inverse_hazard_order({d, 1, n}, cfg);

    out.limit_entry_lhs = out.H1n;
    out.limit_entry_rhs = n / out.h2n;
    out.condition_satisfied = out.limit_entry_lhs <= out.limit_entry_rhs + 1e-9;

    // Both settings charge the consumer the cost at equilibrium, so it nets
    // out of the comparison.
    out.utility_free = out.v1n - 1.0 / out.h2n - m.cost;
    out.utility_limited = out.v1n_minus_1 - m.cost;

    out.free_market_equilibrium_exists = to_string(verify_symmetric_equilibrium(d, n, cfg).verdict);

    const double diff = out.utility_limited - out.utility_free;
    out.utilities_consistent =
        std::abs(diff) <= cfg.consistency_band || ((diff >= 0.0) == out.condition_satisfied);

    if (m.base_value.has_value()) out = apply_base_value(m, std::move(out), cfg);
    return out;
}

std::string to_string(SufficiencyVerdict v) {
    switch (v) {
        case SufficiencyVerdict::Pass: return "pass";
        case SufficiencyVerdict::Fail: return "fail";
        default: return "not-applicable";
    }
}

SufficiencyVerdict mhr_sufficiency_check(const Distribution& d, int n, const NumericConfig& cfg) {
    const Classification cls = classify(d, cfg);
    if (!cls.mhr.pass || !cls.decreasing_density.pass) return SufficiencyVerdict::NotApplicable;
    return limit_entry_condition(d, n, cfg).satisfied ? SufficiencyVerdict::Pass : SufficiencyVerdict::Fail;
}

EquilibriumReport apply_cost(const MarketInstance& m, EquilibriumReport report) {
    if (!(m.cost >= 0.0)) throw InvalidParameterError("cost must be >= 0");
    if (m.cost == 0.0) return report;
    report.cost = m.cost;
    for (double& p : report.candidate_prices) p += m.cost;
    for (double& q : report.best_responses) q += m.cost;
    if (!report.candidate_prices.empty()) {
        double gap = 0.0;
        for (std::size_t i = 0; i < report.candidate_prices.size(); ++i)
            gap = std::max(gap, std::abs(report.best_responses[i] - report.candidate_prices[i]) /
                                    std::max(report.candidate_prices[i], 1e-12));
        report.relative_gap = gap;
    }
    return report;
}

PolicyComparison apply_base_value(const MarketInstance& m, PolicyComparison comparison,
                                  const NumericConfig& cfg) {
    if (!m.base_value.has_value()) return comparison;
    const double mean_w0 = expected_order_stat({*m.base_value, 1, 1}, cfg);
    comparison.base_value_mean = mean_w0;
    comparison.utility_free += mean_w0;
    comparison.utility_limited += mean_w0;
    return comparison;
}

}  // namespace marketeq
