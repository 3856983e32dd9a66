#pragma once

#include <optional>
#include <string>
#include <vector>

#include "marketeq/config.hpp"
#include "marketeq/distribution.hpp"
#include "marketeq/star.hpp"

namespace marketeq {

enum class EqVerdict { Equilibrium, NotEquilibrium, Inconclusive };

std::string to_string(EqVerdict v);

struct EquilibriumReport {
    std::string setting;  // "free-market" | "limited-entry"
    std::string dist_spec;
    int n = 0;
    double cost = 0.0;
    std::vector<double> candidate_prices;
    std::vector<double> best_responses;
    double relative_gap = 0.0;  // max_i |q_i* - p_i| / max(p_i, floor)
    std::vector<double> revenue_at_candidate;
    std::vector<double> revenue_at_best_response;
    MhrCheck star_mhr;
    bool star_mhr_checked = false;
    EqVerdict verdict = EqVerdict::Inconclusive;
    std::string diagnostic;
};

struct BestResponseResult {
    double price = 0.0;
    double revenue = 0.0;
    bool star_mhr = false;           // only meaningful when dual_check ran
    std::optional<double> foc_zero;  // bisection route result when star is MHR
};

struct BestResponseOptions {
    double upper_hint = 0.0;  // extra scale folded into the search bound
    bool dual_check = true;   // run the MHR-gated first-order-condition route
};

/// The unique symmetric-equilibrium candidate 1/h_2^n.
double free_market_candidate(const Distribution& d, int n, const NumericConfig& cfg);

/// Payoff-maximizing price for `provider` against fixed peer prices.
/// Coarse grid + golden section + a first-order-condition polish; when the
/// star distribution passes the MHR grid check, a bisection on the star
/// virtual value must agree to relative 1e-3 or NumericFailure is raised.
BestResponseResult best_response(const std::vector<Distribution>& marginals, int provider,
                                 const std::vector<double>& peer_prices, const NumericConfig& cfg,
                                 const BestResponseOptions& opts = {});

/// Same search run on the independent primal survival integral; used to
/// cross-validate verdicts where the star route lacks an MHR certificate.
BestResponseResult best_response_direct_route(const std::vector<Distribution>& marginals, int provider,
                                              const std::vector<double>& peer_prices, const NumericConfig& cfg,
                                              const BestResponseOptions& opts = {});

EquilibriumReport verify_symmetric_equilibrium(const Distribution& d, int n, const NumericConfig& cfg);

/// All-zero price vector: the unique limited-entry equilibrium.
std::vector<double> limited_entry_equilibrium(int n);

/// Self-mapping box bound max_i survival_i(0)/pdf_i(0) at all-zero prices.
double fixed_point_box(const std::vector<Distribution>& marginals, const NumericConfig& cfg);

struct FixedPointTrace {
    std::vector<std::vector<double>> iterates;  // includes the starting point
    double box_bound = 0.0;
    bool converged = false;
    int iterations = 0;
    bool heuristic = false;  // n > 2 or a marginal without the MHR+ certificate
    bool mutual_best_response_verified = false;
    double max_mutual_gap = 0.0;
};

struct FixedPointResult {
    std::vector<double> prices;
    FixedPointTrace trace;
};

/// Best-response iteration from the all-zero vector, clamped to [0,T]^n.
/// Under the monotone regime (all marginals MHR+) iterates are
/// coordinatewise nondecreasing. Throws NumericFailure when max_iterations
/// is exhausted before the step size drops under fp_tolerance.
FixedPointResult fixed_point_two_providers(const std::vector<Distribution>& marginals, const NumericConfig& cfg);

}  // namespace marketeq
