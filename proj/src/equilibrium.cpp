#include "marketeq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "marketeq/optimize.hpp"
#include "marketeq/order_statistics.hpp"

namespace marketeq {

std::string to_string(EqVerdict v) {
    switch (v) {
        case EqVerdict::Equilibrium: return "equilibrium";
        case EqVerdict::NotEquilibrium: return "not-equilibrium";
        default: return "inconclusive";
    }
}

namespace {

constexpr double kPriceFloor = 1e-12;

double min_hazard(const Distribution& d) {
    double h = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 64; ++j) {
        const double u = 0.999999 * j / 64.0;
        const double x = j == 0 ? d.support_lo() : d.quantile(u);
        try {
            h = std::min(h, d.hazard(x));
        } catch (const UndefinedValueError&) {
        }
    }
    for (double s : d.discontinuities()) h = std::min(h, d.hazard(std::nextafter(s, 1e308)));
    if (!(h > 0.0) || !std::isfinite(h)) throw NumericFailure("could not bound the hazard of " + d.spec());
    return h;
}

struct SearchResult {
    double price;
    double revenue;
};

// Coarse grid, golden-section refinement, then a bisection polish on the
// first-order condition d(q*S)/dq = S - q*f. The polish runs against the
// tighter-tolerance evaluators: locating a sign change keeps the argmax
// error linear in the quadrature error instead of its square root.
SearchResult maximize_revenue(const std::function<double(double)>& survival,
                              const std::function<double(double)>& survival_fine,
                              const std::function<double(double)>& density_fine, double upper,
                              const NumericConfig& cfg) {
    const int n = cfg.grid_points;
    const auto revenue = [&](double q) { return q * survival(q); };

    int best = 0;
    double best_rev = 0.0;
    for (int j = 0; j < n; ++j) {
        const double q = upper * j / (n - 1);
        const double r = revenue(q);
        if (r > best_rev) {
            best_rev = r;
            best = j;
        }
    }
    const double cell = upper / (n - 1);
    const double a = upper * std::max(0, best - 1) / (n - 1);
    const double b = upper * std::min(n - 1, best + 1) / (n - 1);
    auto [x, fx] = golden_section_max(revenue, a, b, std::max(1e-11, 1e-9 * upper));

    if (density_fine) {
        const auto foc = [&](double q) { return survival_fine(q) - q * density_fine(q); };
        double lo = std::max(0.0, x - 0.5 * cell), hi = std::min(upper, x + 0.5 * cell);
        double flo = foc(lo), fhi = foc(hi);
        if (flo > 0.0 && fhi < 0.0) {
            const double root = bisect_root(foc, lo, hi, flo, fhi, std::max(1e-13, 1e-12 * upper));
            const double r = root * survival_fine(root);
            if (r >= fx - 1e-7 * std::max(1.0, std::abs(fx))) {
                x = root;
                fx = std::max(r, fx);
            }
        }
    }
    if (fx >= best_rev) return {x, fx};
    return {upper * best / (n - 1), best_rev};
}

struct RevenueRoutes {
    std::function<double(double)> survival;
    std::function<double(double)> survival_fine;
    std::function<double(double)> density_fine;
};

SearchResult search_with_expansion(const RevenueRoutes& routes, double initial_upper, const NumericConfig& cfg) {
    double upper = initial_upper;
    for (int attempt = 0; attempt < 16; ++attempt) {
        const SearchResult r =
            maximize_revenue(routes.survival, routes.survival_fine, routes.density_fine, upper, cfg);
        if (r.price < 0.99 * upper) return r;
        upper *= 2.0;
    }
    throw NumericFailure("best response search did not separate from its upper bound");
}

NumericConfig tighten(const NumericConfig& cfg) {
    NumericConfig fine = cfg;
    fine.quad_abs_tol = std::max(1e-14, cfg.quad_abs_tol * 1e-3);
    fine.quad_rel_tol = std::max(1e-13, cfg.quad_rel_tol * 1e-3);
    return fine;
}

double initial_upper_bound(const std::vector<Distribution>& marginals, int provider,
                           const std::vector<double>& peer_prices, const BestResponseOptions& opts) {
    const double max_peer = *std::max_element(peer_prices.begin(), peer_prices.end());
    const double h_min = min_hazard(marginals[static_cast<std::size_t>(provider)]);
    return std::max({4.0 * max_peer, 8.0 / h_min, 8.0 * opts.upper_hint, 1.0});
}

}  // namespace

double free_market_candidate(const Distribution& d, int n, const NumericConfig& cfg) {
    if (n < 2) throw InvalidParameterError("free market candidate requires n >= 2");
    const double h2n = expected_hazard_order({d, 2, n}, cfg);
    if (!(h2n > 0.0)) throw NumericFailure("h_2^n is not positive for " + d.spec());
    return 1.0 / h2n;
}

BestResponseResult best_response(const std::vector<Distribution>& marginals, int provider,
                                 const std::vector<double>& peer_prices, const NumericConfig& cfg,
                                 const BestResponseOptions& opts) {
    cfg.validate();
    StarDistribution star(marginals, provider, peer_prices, cfg);
    StarDistribution star_fine(marginals, provider, peer_prices, tighten(cfg));
    const double upper = initial_upper_bound(marginals, provider, peer_prices, opts);

    RevenueRoutes routes;
    routes.survival = [&star](double q) { return star.survival(q); };
    routes.survival_fine = [&star_fine](double q) { return star_fine.survival(q); };
    routes.density_fine = [&star_fine](double q) { return star_fine.pdf(q); };
    const SearchResult grid = search_with_expansion(routes, upper, cfg);
    BestResponseResult out;
    out.price = grid.price;
    out.revenue = grid.revenue;

    if (opts.dual_check) {
        const double q_hi = std::min(star.search_upper_bound(), 4.0 * upper);
        const MhrCheck mhr = star.is_mhr(0.0, q_hi, 257);
        out.star_mhr = mhr.pass;
        if (mhr.pass) {
            // Monotone star hazard: the virtual value has a unique sign change.
            const auto phi = [&](double q) {
                const double f = star.pdf(q);
                if (!(f > 0.0)) return q;
                return q - star.survival(q) / f;
            };
            const int pts = 129;
            double prev_q = 0.0, prev_phi = phi(0.0);
            std::optional<double> root;
            if (prev_phi >= 0.0) root = 0.0;
            for (int j = 1; j < pts && !root; ++j) {
                const double q = q_hi * j / (pts - 1);
                const double p = phi(q);
                if (p >= 0.0) root = bisect_root(phi, prev_q, q, prev_phi, p, std::max(1e-13, 1e-12 * q_hi));
                prev_q = q;
                prev_phi = p;
            }
            if (!root) throw NumericFailure("star virtual value has no zero below the search bound");
            out.foc_zero = *root;
            const double scale = std::max({1e-9, out.price, *root});
            if (std::abs(out.price - *root) > 1e-3 * scale)
                throw NumericFailure("best-response routes disagree: grid " + std::to_string(out.price) +
                                     " vs first-order condition " + std::to_string(*root));
        }
    }
    return out;
}

BestResponseResult best_response_direct_route(const std::vector<Distribution>& marginals, int provider,
                                              const std::vector<double>& peer_prices, const NumericConfig& cfg,
                                              const BestResponseOptions& opts) {
    cfg.validate();
    StarDistribution star(marginals, provider, peer_prices, cfg);
    const double upper = initial_upper_bound(marginals, provider, peer_prices, opts);
    RevenueRoutes routes;
    routes.survival = [&star](double q) { return star.survival_direct(q); };
    routes.survival_fine = routes.survival;
    routes.density_fine = nullptr;
    const SearchResult grid = search_with_expansion(routes, upper, cfg);
    BestResponseResult out;
    out.price = grid.price;
    out.revenue = grid.revenue;
    return out;
}

EquilibriumReport verify_symmetric_equilibrium(const Distribution& d, int n, const NumericConfig& cfg) {
    EquilibriumReport report;
    report.setting = "free-market";
    report.dist_spec = d.spec();
    report.n = n;
    try {
        const double candidate = free_market_candidate(d, n, cfg);
        StarDistribution star(d, n, candidate, cfg);
        const double rev_candidate = candidate * star.survival(candidate);

        std::vector<Distribution> marginals(static_cast<std::size_t>(n), d);
        std::vector<double> peers(static_cast<std::size_t>(n - 1), candidate);
        BestResponseOptions opts;
        opts.upper_hint = candidate;
        const BestResponseResult br = best_response(marginals, 0, peers, cfg, opts);

        report.candidate_prices.assign(static_cast<std::size_t>(n), candidate);
        report.best_responses.assign(static_cast<std::size_t>(n), br.price);
        report.revenue_at_candidate.assign(static_cast<std::size_t>(n), rev_candidate);
        report.revenue_at_best_response.assign(static_cast<std::size_t>(n), br.revenue);
        report.relative_gap = std::abs(br.price - candidate) / std::max(candidate, kPriceFloor);

        const double q_hi = std::min(star.search_upper_bound(), 8.0 * std::max(candidate, 1.0));
        report.star_mhr = star.is_mhr(0.0, q_hi, 257);
        report.star_mhr_checked = true;

        const bool price_ok = report.relative_gap <= cfg.eq_tolerance;
        const bool revenue_ok = br.revenue <= rev_candidate * (1.0 + cfg.rev_tolerance);
        report.verdict = (price_ok && revenue_ok) ? EqVerdict::Equilibrium : EqVerdict::NotEquilibrium;
    } catch (const NumericFailure& e) {
        report.verdict = EqVerdict::Inconclusive;
        report.diagnostic = e.what();
    }
    return report;
}

std::vector<double> limited_entry_equilibrium(int n) {
    if (n < 2) throw InvalidParameterError("limited entry requires n >= 2");
    return std::vector<double>(static_cast<std::size_t>(n), 0.0);
}

double fixed_point_box(const std::vector<Distribution>& marginals, const NumericConfig& cfg) {
    const int n = static_cast<int>(marginals.size());
    if (n < 2) throw InvalidParameterError("fixed point box requires n >= 2");
    double T = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> zeros(static_cast<std::size_t>(n - 1), 0.0);
        StarDistribution star(marginals, i, zeros, cfg);
        const double f0 = star.pdf(0.0);
        if (!(f0 > 0.0)) throw NumericFailure("star density vanishes at zero prices for provider " +
                                              std::to_string(i));
        T = std::max(T, star.survival(0.0) / f0);
    }
    return T;
}

FixedPointResult fixed_point_two_providers(const std::vector<Distribution>& marginals, const NumericConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(marginals.size());
    if (n < 2) throw InvalidParameterError("fixed point iteration requires n >= 2");

    FixedPointResult result;
    FixedPointTrace& trace = result.trace;
    trace.box_bound = fixed_point_box(marginals, cfg);
    trace.heuristic = n > 2;
    bool monotone = true;
    for (const Distribution& d : marginals) {
        const Classification cls = classify(d, cfg);
        if (!cls.mhr_plus.pass) {
            monotone = false;
            trace.heuristic = true;
        }
    }

    std::vector<double> p(static_cast<std::size_t>(n), 0.0);
    trace.iterates.push_back(p);
    BestResponseOptions opts;
    opts.upper_hint = trace.box_bound;
    opts.dual_check = false;

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        std::vector<double> raw(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            std::vector<double> peers;
            for (int j = 0; j < n; ++j)
                if (j != i) peers.push_back(p[static_cast<std::size_t>(j)]);
            raw[static_cast<std::size_t>(i)] = best_response(marginals, i, peers, cfg, opts).price;
        }
        // Convergence is judged on the clamped iterate sequence. Under the
        // monotone regime the map is nondecreasing from 0, so a dip of the
        // raw response below the running iterate is numeric wobble.
        double change = 0.0;
        std::vector<double> next(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double v = std::min(raw[static_cast<std::size_t>(i)], trace.box_bound);
            if (monotone) v = std::max(v, p[static_cast<std::size_t>(i)]);
            next[static_cast<std::size_t>(i)] = v;
            change = std::max(change, std::abs(v - p[static_cast<std::size_t>(i)]));
        }
        p = next;
        trace.iterates.push_back(p);
        trace.iterations = it;
        if (change <= cfg.fp_tolerance) {
            trace.converged = true;
            break;
        }
    }
    if (!trace.converged)
        throw NumericFailure("fixed point iteration did not converge in " + std::to_string(cfg.max_iterations) +
                             " iterations (last change above fp_tolerance)");

    trace.max_mutual_gap = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> peers;
        for (int j = 0; j < n; ++j)
            if (j != i) peers.push_back(p[static_cast<std::size_t>(j)]);
        BestResponseOptions verify_opts;
        verify_opts.upper_hint = trace.box_bound;
        const BestResponseResult br = best_response(marginals, i, peers, cfg, verify_opts);
        const double gap = std::abs(br.price - p[static_cast<std::size_t>(i)]) /
                           std::max(p[static_cast<std::size_t>(i)], kPriceFloor);
        trace.max_mutual_gap = std::max(trace.max_mutual_gap, gap);
    }
    trace.mutual_best_response_verified = trace.max_mutual_gap <= cfg.eq_tolerance;
    result.prices = p;
    return result;
}

}  // namespace marketeq
