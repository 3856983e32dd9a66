#pragma once

#include <optional>
#include <vector>

#include "marketeq/config.hpp"
#include "marketeq/distribution.hpp"

namespace marketeq {

struct MhrCheck {
    bool pass = true;
    std::optional<double> witness;
};

/// The derived law of "provider i wins the consumer at price q" given the
/// peers' posted prices: survival(q) is the purchase probability, pdf its
/// negated q-derivative. Immutable and pure; evaluations recompute the
/// shift M = max(0, q - min peer price) per query.
class StarDistribution {
public:
    /// marginals.size() = n >= 2; peer_prices holds p_j for j != provider,
    /// in ascending provider order.
    StarDistribution(std::vector<Distribution> marginals, int provider, std::vector<double> peer_prices,
                     NumericConfig cfg, bool force_general_kernel = false);

    /// Symmetric shorthand: n identical marginals, all peers at price p.
    StarDistribution(const Distribution& d, int n, double peer_price, const NumericConfig& cfg);

    int n() const { return static_cast<int>(marginals_.size()); }
    int provider() const { return provider_; }
    double min_peer_price() const { return min_peer_; }
    const std::vector<double>& peer_prices() const { return peer_prices_; }
    const Distribution& own_marginal() const { return marginals_[static_cast<std::size_t>(provider_)]; }

    /// Density of the best shifted peer value: sum over peers j of
    /// f_j(x-q+p_j) * prod_{k != i,j} F_k(x-q+p_k), zero below the supports.
    double kernel_g(double q, double x) const;

    /// Purchase probability 1 - F*(q).
    double survival(double q) const;

    /// Same quantity through the primal integral f_i(x) * prod F_j(x-q+p_j);
    /// an algebraically independent route used for cross-validation.
    double survival_direct(double q) const;

    double pdf(double q) const;

    /// Left q-derivative of pdf. Includes the density-jump terms of the own
    /// marginal (support edges and interior jumps) at points >= M; without
    /// them the formula is wrong for bounded supports and for n = 2 above
    /// the peer price.
    double pdf_prime(double q) const;

    double hazard(double q) const;
    double virtual_value(double q) const;

    /// Grid check of pdf(q)^2 >= -pdf_prime(q) * survival(q).
    MhrCheck is_mhr(double q_lo, double q_hi, int points) const;

    /// Smallest price beyond which survival drops under `floor`.
    double search_upper_bound(double floor = 1e-9) const;

private:
    double integrate_weighted(double q, int weight_kind) const;  // 0: 1-F_i, 1: f_i, 2: f_i'
    std::vector<double> panel_points(double q, double a, double b) const;

    std::vector<Distribution> marginals_;
    int provider_;
    std::vector<double> peer_prices_;  // indexed by peer slot; global index via peer_global_
    std::vector<int> peer_global_;
    double min_peer_;
    NumericConfig cfg_;
    bool symmetric_;
};

/// Expected value received by the consumer at the given price vector
/// (mandatory purchase: the argmax of v_i - p_i is bought).
double expected_winner_value(const std::vector<Distribution>& marginals, const std::vector<double>& prices,
                             const NumericConfig& cfg);

}  // namespace marketeq
