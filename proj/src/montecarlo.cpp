#include "marketeq/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "marketeq/errors.hpp"
#include "marketeq/rng.hpp"

namespace marketeq {

namespace {

void check_inputs(const std::vector<Distribution>& marginals, const std::vector<double>& prices,
                  const std::vector<int>& active_set, long long samples) {
    const int n = static_cast<int>(marginals.size());
    if (n < 1) throw InvalidParameterError("simulation requires at least one provider");
    if (static_cast<int>(prices.size()) != n) throw InvalidParameterError("prices/marginals size mismatch");
    if (active_set.empty()) throw InvalidParameterError("active set must be nonempty");
    for (int i : active_set)
        if (i < 0 || i >= n) throw InvalidParameterError("active set index out of range");
    if (samples < 1) throw InvalidParameterError("samples must be >= 1");
}

}  // namespace

SimResult simulate_market(const std::vector<Distribution>& marginals, const std::vector<double>& prices,
                          const std::vector<int>& active_set, const std::optional<Distribution>& base_value,
                          long long samples, std::uint64_t seed) {
    check_inputs(marginals, prices, active_set, samples);
    const int n = static_cast<int>(marginals.size());
    const std::uint64_t base_slot = static_cast<std::uint64_t>(n);

    SimResult out;
    out.samples = samples;
    out.seed = seed;
    out.counts.assign(static_cast<std::size_t>(n), 0);

    double sum_value = 0.0, sum_value2 = 0.0;
    double sum_pay = 0.0, sum_pay2 = 0.0;
    double sum_util = 0.0, sum_util2 = 0.0;

    for (long long c = 0; c < samples; ++c) {
        int winner = -1;
        double best_net = 0.0, winner_value = 0.0;
        for (int i : active_set) {
            const double v = marginals[static_cast<std::size_t>(i)].sample(
                counter_uniform(seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(i)));
            const double net = v - prices[static_cast<std::size_t>(i)];
            if (winner < 0 || net > best_net) {
                winner = i;
                best_net = net;
                winner_value = v;
            }
        }
        if (base_value.has_value())
            winner_value += base_value->sample(counter_uniform(seed, static_cast<std::uint64_t>(c), base_slot));

        ++out.counts[static_cast<std::size_t>(winner)];
        const double pay = prices[static_cast<std::size_t>(winner)];
        const double util = winner_value - pay;
        sum_value += winner_value;
        sum_value2 += winner_value * winner_value;
        sum_pay += pay;
        sum_pay2 += pay * pay;
        sum_util += util;
        sum_util2 += util * util;
    }

    const double N = static_cast<double>(samples);
    out.shares.assign(static_cast<std::size_t>(n), 0.0);
    double partial = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        out.shares[static_cast<std::size_t>(i)] = static_cast<double>(out.counts[static_cast<std::size_t>(i)]) / N;
        partial += out.shares[static_cast<std::size_t>(i)];
    }
    out.shares[static_cast<std::size_t>(n - 1)] = 1.0 - partial;  // counting identity, exact

    out.welfare = sum_value / N;
    out.revenue = sum_pay / N;
    out.utility = sum_util / N;

    const auto stderr_of = [&](double sum, double sum2) {
        if (samples < 2) return 0.0;
        const double mean = sum / N;
        const double var = std::max(0.0, (sum2 - N * mean * mean) / (N - 1.0));
        return std::sqrt(var / N);
    };
    out.share_stderr.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const double s = static_cast<double>(out.counts[static_cast<std::size_t>(i)]) / N;
        out.share_stderr[static_cast<std::size_t>(i)] = samples < 2 ? 0.0 : std::sqrt(s * (1.0 - s) / N);
    }
    out.welfare_stderr = stderr_of(sum_value, sum_value2);
    out.revenue_stderr = stderr_of(sum_pay, sum_pay2);
    out.utility_stderr = stderr_of(sum_util, sum_util2);
    return out;
}

std::pair<double, double> empirical_star_survival(const std::vector<Distribution>& marginals, int provider,
                                                  const std::vector<double>& peer_prices, double q,
                                                  long long samples, std::uint64_t seed) {
    const int n = static_cast<int>(marginals.size());
    if (provider < 0 || provider >= n) throw InvalidParameterError("provider index out of range");
    if (static_cast<int>(peer_prices.size()) != n - 1)
        throw InvalidParameterError("expected n-1 peer prices");
    std::vector<double> prices(static_cast<std::size_t>(n), 0.0);
    std::size_t peer = 0;
    for (int j = 0; j < n; ++j)
        prices[static_cast<std::size_t>(j)] = (j == provider) ? q : peer_prices[peer++];
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) all[static_cast<std::size_t>(j)] = j;
    const SimResult r = simulate_market(marginals, prices, all, std::nullopt, samples, seed);
    return {r.shares[static_cast<std::size_t>(provider)], r.share_stderr[static_cast<std::size_t>(provider)]};
}

std::vector<RevenuePoint> empirical_revenue_curve(const std::vector<Distribution>& marginals, int provider,
                                                  const std::vector<double>& peer_prices,
                                                  const std::vector<double>& q_grid, long long samples,
                                                  std::uint64_t seed) {
    const int n = static_cast<int>(marginals.size());
    if (provider < 0 || provider >= n) throw InvalidParameterError("provider index out of range");
    if (static_cast<int>(peer_prices.size()) != n - 1)
        throw InvalidParameterError("expected n-1 peer prices");
    if (q_grid.empty()) throw InvalidParameterError("price grid must be nonempty");
    if (samples < 1) throw InvalidParameterError("samples must be >= 1");

    // Common random numbers: one margin z = v_i - max_j (v_j - p_j) per
    // consumer serves every grid price. The provider wins at q iff z > q
    // (ties to the lowest index are kept for provider 0).
    std::vector<double> margins(static_cast<std::size_t>(samples));
    for (long long c = 0; c < samples; ++c) {
        double v_own = 0.0, best_peer = -std::numeric_limits<double>::infinity();
        std::size_t peer = 0;
        for (int j = 0; j < n; ++j) {
            const double v = marginals[static_cast<std::size_t>(j)].sample(
                counter_uniform(seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(j)));
            if (j == provider) {
                v_own = v;
            } else {
                best_peer = std::max(best_peer, v - peer_prices[peer]);
                ++peer;
            }
        }
        margins[static_cast<std::size_t>(c)] = v_own - best_peer;
    }
    std::sort(margins.begin(), margins.end());

    const double N = static_cast<double>(samples);
    std::vector<RevenuePoint> out;
    out.reserve(q_grid.size());
    for (double q : q_grid) {
        const auto it = (provider == 0) ? std::lower_bound(margins.begin(), margins.end(), q)
                                        : std::upper_bound(margins.begin(), margins.end(), q);
        const double wins = static_cast<double>(margins.end() - it);
        const double share = wins / N;
        out.push_back({q, q * share, q * std::sqrt(share * (1.0 - share) / N)});
    }
    return out;
}

double empirical_best_response(const std::vector<Distribution>& marginals, int provider,
                               const std::vector<double>& peer_prices, const std::vector<double>& q_grid,
                               long long samples, std::uint64_t seed) {
    const std::vector<RevenuePoint> curve =
        empirical_revenue_curve(marginals, provider, peer_prices, q_grid, samples, seed);
    std::size_t best = 0;
    for (std::size_t j = 1; j < curve.size(); ++j)
        if (curve[j].revenue > curve[best].revenue) best = j;
    return curve[best].q;
}

std::vector<int> simulate_choices(const std::vector<Distribution>& marginals, const std::vector<double>& prices,
                                  const std::optional<Distribution>& base_value, long long samples,
                                  std::uint64_t seed) {
    const int n = static_cast<int>(marginals.size());
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) all[static_cast<std::size_t>(j)] = j;
    check_inputs(marginals, prices, all, samples);
    const std::uint64_t base_slot = static_cast<std::uint64_t>(n);

    std::vector<int> choices(static_cast<std::size_t>(samples));
    for (long long c = 0; c < samples; ++c) {
        int winner = -1;
        double best_net = 0.0;
        double w0 = base_value.has_value()
                        ? base_value->sample(counter_uniform(seed, static_cast<std::uint64_t>(c), base_slot))
                        : 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = w0 + marginals[static_cast<std::size_t>(i)].sample(
                                      counter_uniform(seed, static_cast<std::uint64_t>(c),
                                                      static_cast<std::uint64_t>(i)));
            const double net = v - prices[static_cast<std::size_t>(i)];
            if (winner < 0 || net > best_net) {
                winner = i;
                best_net = net;
            }
        }
        choices[static_cast<std::size_t>(c)] = winner;
    }
    return choices;
}

}  // namespace marketeq
