#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "marketeq/distribution.hpp"

namespace marketeq {

/// Simulation summary. Shares are exact purchase frequencies and sum to 1
/// (mandatory purchase); counts carry the underlying integers.
struct SimResult {
    std::vector<double> shares;
    std::vector<long long> counts;
    double revenue = 0.0;  // mean per-consumer payment
    double welfare = 0.0;  // mean value of the chosen plan
    double utility = 0.0;  // welfare - revenue
    std::vector<double> share_stderr;
    double revenue_stderr = 0.0;
    double welfare_stderr = 0.0;
    double utility_stderr = 0.0;
    long long samples = 0;
    std::uint64_t seed = 0;
};

/// Draws N consumers (inverse-cdf of counter-keyed uniforms) and lets each
/// buy the active plan maximizing v_i - p_i, ties to the lowest index.
/// Deterministic in (seed, N): consumer c's draw for provider i depends only
/// on (seed, c, i), and aggregation runs in consumer order.
SimResult simulate_market(const std::vector<Distribution>& marginals, const std::vector<double>& prices,
                          const std::vector<int>& active_set, const std::optional<Distribution>& base_value,
                          long long samples, std::uint64_t seed);

/// Empirical purchase probability for `provider` at price q against fixed
/// peer prices. Returns (estimate, stderr).
std::pair<double, double> empirical_star_survival(const std::vector<Distribution>& marginals, int provider,
                                                  const std::vector<double>& peer_prices, double q,
                                                  long long samples, std::uint64_t seed);

/// One point of the common-random-number revenue curve per grid price:
/// {q, revenue estimate, stderr}. The same consumer draws back every q.
struct RevenuePoint {
    double q = 0.0;
    double revenue = 0.0;
    double stderr_ = 0.0;
};

std::vector<RevenuePoint> empirical_revenue_curve(const std::vector<Distribution>& marginals, int provider,
                                                  const std::vector<double>& peer_prices,
                                                  const std::vector<double>& q_grid, long long samples,
                                                  std::uint64_t seed);

/// argmax of the common-random-number revenue curve (smallest q on ties).
double empirical_best_response(const std::vector<Distribution>& marginals, int provider,
                               const std::vector<double>& peer_prices, const std::vector<double>& q_grid,
                               long long samples, std::uint64_t seed);

/// Chosen provider index per consumer; used to verify choice invariance
/// under a common base value with coupled draws.
std::vector<int> simulate_choices(const std::vector<Distribution>& marginals, const std::vector<double>& prices,
                                  const std::optional<Distribution>& base_value, long long samples,
                                  std::uint64_t seed);

}  // namespace marketeq
