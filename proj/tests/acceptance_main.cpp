// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Every tolerance is pinned here, in code.

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "marketeq/appendix.hpp"
#include "marketeq/equilibrium.hpp"
#include "marketeq/montecarlo.hpp"
#include "marketeq/order_statistics.hpp"
#include "marketeq/policy.hpp"
#include "marketeq/rng.hpp"
#include "marketeq/star.hpp"

using namespace marketeq;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void log(const std::string& what) { notes.push_back(what); }
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

const NumericConfig cfg;

// ---- criterion 1: the no-equilibrium counterexample ------------------------
Outcome criterion1() {
    Outcome out;
    const Distribution d = make_epsk(0.1, 2.0);
    const double h22 = expected_hazard_order({d, 2, 2}, cfg);
    out.require(std::abs(h22 - 0.325) <= 1e-9, "h_2^2 = 0.325 within 1e-9 (got " + fmt(h22) + ")");

    const double candidate = free_market_candidate(d, 2, cfg);
    out.require(std::abs(candidate - 40.0 / 13.0) <= 1e-9 * (40.0 / 13.0),
                "candidate = 40/13 within rel 1e-9 (got " + fmt(candidate) + ")");

    const EquilibriumReport rep = verify_symmetric_equilibrium(d, 2, cfg);
    out.require(rep.relative_gap > 0.05,
                "relative best-response gap exceeds 0.05 (got " + fmt(rep.relative_gap) + ")");
    out.require(rep.verdict == EqVerdict::NotEquilibrium, "oracle verdict is not-equilibrium");

    const double br = rep.best_responses.front();
    if (std::abs(br - 3.50618) <= 1e-2) {
        out.log("best response " + fmt(br) + " matches the reported 3.50618 within 1e-2");
    } else {
        out.log("DISCREPANCY LOGGED: best response " + fmt(br) + " vs reported 3.50618");
    }
    return out;
}

// ---- criterion 2: the condition-violated counterexample --------------------
Outcome criterion2() {
    Outcome out;
    const Distribution d = make_epsk(0.02, 4.0 / 3.0);
    const double H12 = expected_inverse_hazard_order({d, 1, 2}, cfg);
    out.require(std::abs(H12 - 28.5625) <= 1e-6, "H_1^2 = 28.5625 within 1e-6 (got " + fmt(H12) + ")");

    const LimitEntryCondition cond = limit_entry_condition(d, 2, cfg);
    out.require(!cond.satisfied && cond.lhs > 320.0 / 13.0 - 1e-9,
                "Limit-Entry condition violated: " + fmt(cond.lhs) + " > 320/13 = " + fmt(320.0 / 13.0));

    const double candidate = free_market_candidate(d, 2, cfg);
    std::vector<Distribution> marginals(2, d);
    BestResponseOptions opts;
    opts.upper_hint = candidate;
    const BestResponseResult star_route = best_response(marginals, 0, {candidate}, cfg, opts);
    const BestResponseResult direct_route = best_response_direct_route(marginals, 0, {candidate}, cfg, opts);
    const double scale = std::max({1e-9, star_route.price, direct_route.price});
    out.require(std::abs(star_route.price - direct_route.price) <= 1e-3 * scale,
                "independent best-response routes agree to 1e-3 (" + fmt(star_route.price) + " vs " +
                    fmt(direct_route.price) + ")");

    const double gap = std::abs(star_route.price - candidate) / candidate;
    out.log(std::string("verdict from the agreeing routes: ") +
            (gap <= cfg.eq_tolerance ? "equilibrium" : "not-equilibrium") + " (gap " + fmt(gap) + ")");
    out.log("REPORTED INCONSISTENCY: candidate 160/13 = " + fmt(160.0 / 13.0) +
            " vs the formula's 160/3 = " + fmt(160.0 / 3.0) + "; best response to the candidate is " +
            fmt(star_route.price) + ", so the reported symmetric equilibrium does not hold");
    return out;
}

// ---- criterion 3: the condition-satisfied side ------------------------------
Outcome criterion3() {
    Outcome out;
    const LimitEntryCondition cond = limit_entry_condition(make_epsk(0.1, 2.0), 2, cfg);
    out.require(std::abs(cond.lhs - 3.25) <= 1e-9, "lhs = 3.25 within 1e-9 (got " + fmt(cond.lhs) + ")");
    out.require(std::abs(cond.rhs - 80.0 / 13.0) <= 1e-9 * (80.0 / 13.0),
                "rhs = 80/13 within 1e-9 (got " + fmt(cond.rhs) + ")");
    out.require(cond.satisfied, "condition satisfied at eps=0.1, k=2, n=2");
    return out;
}

// ---- criterion 4: anti-MHR star witness -------------------------------------
Outcome criterion4() {
    Outcome out;
    bool found = false;
    for (double eps : {0.01, 0.02, 0.05, 0.1, 0.15, 0.2}) {
        for (double k : {1.5, 2.0, 4.0, 8.0, 16.0}) {
            const Distribution d = make_epsk(eps, k);
            if (!classify(d, cfg).mhr.pass) continue;
            const double p = free_market_candidate(d, 2, cfg);
            StarDistribution star(d, 2, p, cfg);
            if (star.is_mhr(0.05 * p, 4.0 * p, 129).pass) continue;

            // Certify a strictly decreasing hazard run of length >= 0.01.
            const int pts = 481;
            double run_start = 0.0, run_len = 0.0, cur_start = 0.0, prev_h = 0.0, prev_q = 0.0;
            bool in_run = false;
            for (int j = 0; j < pts; ++j) {
                const double q = 0.05 * p + (4.0 * p - 0.05 * p) * j / (pts - 1);
                const double h = star.hazard(q);
                if (j > 0 && h < prev_h - 1e-12 * std::max(1.0, prev_h)) {
                    if (!in_run) {
                        cur_start = prev_q;
                        in_run = true;
                    }
                    if (q - cur_start > run_len) {
                        run_len = q - cur_start;
                        run_start = cur_start;
                    }
                } else {
                    in_run = false;
                }
                prev_q = q;
                prev_h = h;
            }
            if (run_len >= 0.01) {
                found = true;
                out.log("witness eps=" + fmt(eps) + " k=" + fmt(k) + " p=" + fmt(p) +
                        ": marginal passes MHR, star hazard strictly decreasing on [" + fmt(run_start) + "," +
                        fmt(run_start + run_len) + "] (length " + fmt(run_len) + ")");
            }
            if (found) break;
        }
        if (found) break;
    }
    out.require(found, "sweep finds an MHR marginal with an anti-MHR star interval of length >= 0.01");
    return out;
}

// ---- criterion 5: sufficient-conditions property suite -----------------------
Outcome criterion5() {
    Outcome out;
    const std::vector<Distribution> dists = {make_exponential(1.0), make_exponential(3.0), make_uniform(0, 1),
                                             make_uniform(0, 2), make_half_normal(1.0)};
    for (const Distribution& d : dists) {
        const Classification cls = classify(d, cfg);
        out.require(cls.mhr_plus.pass, d.spec() + ": classify = MHR+");
        out.require(cls.decreasing_density.pass, d.spec() + ": classify = decreasing density");
        for (int n : {2, 3, 5}) {
            const double candidate = free_market_candidate(d, n, cfg);
            const EquilibriumReport rep = verify_symmetric_equilibrium(d, n, cfg);
            out.require(rep.verdict == EqVerdict::Equilibrium,
                        d.spec() + " n=" + std::to_string(n) + ": equilibrium verdict");
            out.require(std::abs(rep.best_responses.front() - candidate) <= 1e-3 * std::max(1.0, candidate),
                        d.spec() + " n=" + std::to_string(n) + ": best response at 1/h_2^n within 1e-3");
            const PolicyComparison cmp = compare_policies(MarketInstance::symmetric_market(d, n), cfg);
            out.require(cmp.condition_satisfied,
                        d.spec() + " n=" + std::to_string(n) + ": Limit-Entry condition satisfied");
            out.require(cmp.utility_limited - cmp.utility_free > 0.0,
                        d.spec() + " n=" + std::to_string(n) + ": utility margin positive");
        }
    }
    return out;
}

// ---- criterion 6: identity suite ---------------------------------------------
Outcome criterion6() {
    Outcome out;
    const std::vector<Distribution> dists = {make_exponential(1.0), make_exponential(3.0), make_uniform(0, 1),
                                             make_uniform(0, 2), make_half_normal(1.0), make_epsk(0.1, 2.0)};
    const double tol = 1e-6;
    for (const Distribution& d : dists) {
        for (int n : {2, 3, 5}) {
            const double v1 = expected_order_stat({d, 1, n}, cfg);
            const double v2 = expected_order_stat({d, 2, n}, cfg);
            const double v1m = expected_order_stat({d, 1, n - 1}, cfg);
            const double H1 = expected_inverse_hazard_order({d, 1, n}, cfg);
            out.require(std::abs(v2 - (v1 - H1)) <= tol * std::max(1.0, std::abs(v1)),
                        d.spec() + " n=" + std::to_string(n) + ": Myerson identity");
            out.require(std::abs(v1m - ((n - 1.0) / n * v1 + v2 / n)) <= tol * std::max(1.0, std::abs(v1m)),
                        d.spec() + " n=" + std::to_string(n) + ": coupling identity");

            // expected_hazard_order raises NumericFailure unless its two
            // routes (direct vs n*E[f(X_1^{n-1})]) agree to relative 1e-6.
            const double h2n = expected_hazard_order({d, 2, n}, cfg);
            out.require(h2n > 0.0, d.spec() + " n=" + std::to_string(n) + ": two-route h_2^n agreement");

            StarDistribution star_low(d, n, 0.1, cfg);
            StarDistribution star_mid(d, n, 1.0, cfg);
            StarDistribution star_high(d, n, 5.0, cfg);
            const StarDistribution* stars[] = {&star_low, &star_mid, &star_high};
            const double peers[] = {0.1, 1.0, 5.0};
            for (int t = 0; t < 3; ++t) {
                out.require(std::abs(stars[t]->survival(peers[t]) - 1.0 / n) <= tol,
                            d.spec() + " n=" + std::to_string(n) + " p=" + fmt(peers[t]) +
                                ": survival at the common price = 1/n");
                out.require(std::abs(stars[t]->virtual_value(peers[t]) - (peers[t] - 1.0 / h2n)) <=
                                tol * std::max(1.0, peers[t]),
                            d.spec() + " n=" + std::to_string(n) + " p=" + fmt(peers[t]) +
                                ": star virtual value = p - 1/h_2^n");
            }
        }
    }
    return out;
}

// ---- criterion 7: Monte Carlo cross-validation --------------------------------
Outcome criterion7() {
    Outcome out;
    const long long N = 1000000;
    SplitMix64 rng(20260808);
    const auto random_dist = [&]() -> Distribution {
        switch (rng.next() % 4) {
            case 0: return make_exponential(rng.next_in(0.5, 3.0));
            case 1: return make_uniform(0.0, rng.next_in(0.5, 2.0));
            case 2: return make_half_normal(rng.next_in(0.5, 2.0));
            default: return make_epsk(rng.next_in(0.05, 0.5), rng.next_in(1.5, 6.0));
        }
    };
    for (int scenario = 0; scenario < 10; ++scenario) {
        const int n = 2 + static_cast<int>(rng.next() % 2);
        std::vector<Distribution> marginals;
        std::vector<double> prices;
        for (int i = 0; i < n; ++i) {
            marginals.push_back(random_dist());
            prices.push_back(rng.next_in(0.0, 1.5));
        }
        std::vector<int> active;
        for (int i = 0; i < n; ++i) active.push_back(i);
        const std::uint64_t seed = 555000 + static_cast<std::uint64_t>(scenario);

        const SimResult sim = simulate_market(marginals, prices, active, std::nullopt, N, seed);
        const SimResult rerun = simulate_market(marginals, prices, active, std::nullopt, N, seed);
        out.require(sim.counts == rerun.counts && sim.welfare == rerun.welfare && sim.revenue == rerun.revenue,
                    "scenario " + std::to_string(scenario) + ": byte-identical rerun");

        double analytic_revenue = 0.0;
        std::string label = "scenario " + std::to_string(scenario);
        for (int i = 0; i < n; ++i) {
            std::vector<double> peer_prices;
            for (int j = 0; j < n; ++j)
                if (j != i) peer_prices.push_back(prices[static_cast<std::size_t>(j)]);
            StarDistribution star(marginals, i, peer_prices, cfg);
            const double share = star.survival(prices[static_cast<std::size_t>(i)]);
            analytic_revenue += prices[static_cast<std::size_t>(i)] * share;
            out.require(std::abs(share - sim.shares[static_cast<std::size_t>(i)]) <=
                            4.0 * std::max(sim.share_stderr[static_cast<std::size_t>(i)], 1e-6),
                        label + " provider " + std::to_string(i) + ": share within 4 standard errors");
        }
        const double analytic_welfare = expected_winner_value(marginals, prices, cfg);
        out.require(std::abs(analytic_welfare - sim.welfare) <= 4.0 * std::max(sim.welfare_stderr, 1e-6),
                    label + ": welfare within 4 standard errors");
        out.require(std::abs(analytic_revenue - sim.revenue) <= 4.0 * std::max(sim.revenue_stderr, 1e-6),
                    label + ": revenue within 4 standard errors");
        out.require(std::abs((analytic_welfare - analytic_revenue) - sim.utility) <=
                        4.0 * std::max(sim.utility_stderr, 1e-6),
                    label + ": utility within 4 standard errors");
    }
    return out;
}

// ---- criterion 8: cost and base-value extensions -------------------------------
Outcome criterion8() {
    Outcome out;
    const Distribution d = make_uniform(0, 1);
    const EquilibriumReport base = verify_symmetric_equilibrium(d, 2, cfg);
    const PolicyComparison cmp0 = compare_policies(MarketInstance::symmetric_market(d, 2, 0.0), cfg);
    const double diff0 = cmp0.utility_limited - cmp0.utility_free;
    for (double c : {0.5, 3.0}) {
        const EquilibriumReport shifted = apply_cost(MarketInstance::symmetric_market(d, 2, c), base);
        for (std::size_t i = 0; i < shifted.candidate_prices.size(); ++i) {
            out.require(std::abs(shifted.candidate_prices[i] - (base.candidate_prices[i] + c)) <= 1e-9,
                        "cost " + fmt(c) + ": candidate price shifts by exactly c");
            out.require(std::abs(shifted.best_responses[i] - (base.best_responses[i] + c)) <= 1e-9,
                        "cost " + fmt(c) + ": best response shifts by exactly c");
        }
        const PolicyComparison cmp = compare_policies(MarketInstance::symmetric_market(d, 2, c), cfg);
        out.require(std::abs((cmp.utility_limited - cmp.utility_free) - diff0) <= 1e-9,
                    "cost " + fmt(c) + ": utility difference unchanged within 1e-9");
    }

    std::vector<Distribution> marginals(2, d);
    const std::vector<double> prices{0.45, 0.55};
    const std::optional<Distribution> w0 = make_uniform(0, 2);
    const auto plain = simulate_choices(marginals, prices, std::nullopt, 100000, 808);
    const auto coupled = simulate_choices(marginals, prices, w0, 100000, 808);
    out.require(plain == coupled, "base value leaves every coupled consumer's chosen index unchanged");
    return out;
}

// ---- criterion 9: asymmetric fixed point ----------------------------------------
Outcome criterion9() {
    Outcome out;
    {
        std::vector<Distribution> uu(2, make_uniform(0, 1));
        const FixedPointResult r = fixed_point_two_providers(uu, cfg);
        out.require(r.trace.converged, "uniform x uniform converges");
        out.require(std::abs(r.prices[0] - 0.5) <= 1e-6 && std::abs(r.prices[1] - 0.5) <= 1e-6,
                    "uniform x uniform reproduces the symmetric equilibrium to 1e-6");
    }
    {
        std::vector<Distribution> ee(2, make_exponential(1.0));
        const FixedPointResult r = fixed_point_two_providers(ee, cfg);
        out.require(std::abs(r.prices[0] - 1.0) <= 1e-6 && std::abs(r.prices[1] - 1.0) <= 1e-6,
                    "exp x exp reproduces the symmetric equilibrium to 1e-6");
    }
    {
        std::vector<Distribution> m{make_exponential(1.0), make_exponential(0.5)};
        const FixedPointResult r = fixed_point_two_providers(m, cfg);
        out.require(r.trace.converged, "exp(1) x exp(0.5) converges");
        const double T = r.trace.box_bound;
        bool inside = true, monotone = true;
        for (std::size_t it = 0; it < r.trace.iterates.size(); ++it) {
            for (double p : r.trace.iterates[it])
                if (p < -1e-12 || p > T + 1e-12) inside = false;
            if (it > 0)
                for (std::size_t i = 0; i < 2; ++i)
                    if (r.trace.iterates[it][i] < r.trace.iterates[it - 1][i] - 1e-10) monotone = false;
        }
        out.require(inside, "iterates stay inside [0,T]^2");
        out.require(monotone, "iterates are coordinatewise nondecreasing");
        out.require(r.trace.mutual_best_response_verified && r.trace.max_mutual_gap <= 1e-3,
                    "limit passes mutual best-response verification at 1e-3 (gap " +
                        fmt(r.trace.max_mutual_gap) + ")");
        out.log("fixed point (" + fmt(r.prices[0]) + ", " + fmt(r.prices[1]) + ") in " +
                std::to_string(r.trace.iterations) + " iterations");
    }
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> criteria = {
        {1, "no-equilibrium counterexample (eps=0.1, k=2)", criterion1},
        {2, "condition-violated counterexample (eps=0.02, k=4/3)", criterion2},
        {3, "condition-satisfied instance (eps=0.1, k=2)", criterion3},
        {4, "anti-MHR star witness sweep", criterion4},
        {5, "sufficient-conditions property suite", criterion5},
        {6, "identity suite", criterion6},
        {7, "Monte Carlo cross-validation", criterion7},
        {8, "cost and base-value extensions", criterion8},
        {9, "asymmetric fixed point", criterion9},
    };

    int failures = 0;
    for (const Entry& entry : criteria) {
        Outcome out;
        try {
            out = entry.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.notes.push_back(std::string("ABORTED: ") + e.what());
        }
        std::printf("criterion %d: %s - %s\n", entry.id, out.pass ? "PASS" : "FAIL", entry.title);
        for (const std::string& note : out.notes) std::printf("    %s\n", note.c_str());
        if (!out.pass) ++failures;
    }
    if (failures) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 4;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
