#include "marketeq/order_statistics.hpp"

#include <cmath>
#include <string>

#include "marketeq/quadrature.hpp"

namespace marketeq {

namespace {

void check_query(const OrderStatQuery& q) {
    if (q.n < 1 || q.i < 1 || q.i > q.n)
        throw InvalidParameterError("order statistic requires 1 <= i <= n, got i=" + std::to_string(q.i) +
                                    " n=" + std::to_string(q.n));
}

double rank_coefficient(int i, int n) {
    double c = 1.0;  // n! / ((i-1)! (n-i)!)
    for (int j = n - i + 1; j <= n; ++j) c *= j;
    for (int j = 2; j <= i - 1; ++j) c /= j;
    return c;
}

template <class Weight>
double integrate_against_order_stat(const OrderStatQuery& q, const NumericConfig& cfg, const Weight& w) {
    const Distribution& d = q.dist;
    const double lo = d.support_lo();
    const double hi = d.upper_integration_limit(cfg.truncation_quantile);
    const double coef = rank_coefficient(q.i, q.n);
    const auto integrand = [&](double x) {
        const double F = d.cdf(x);
        return w(x) * coef * d.pdf(x) * std::pow(F, q.n - q.i) * std::pow(1.0 - F, q.i - 1);
    };
    return integrate(integrand, lo, hi, d.discontinuities(), cfg.quad_abs_tol, cfg.quad_rel_tol);
}

}  // namespace

double order_stat_density(const OrderStatQuery& q, double x) {
    check_query(q);
    const double F = q.dist.cdf(x);
    return rank_coefficient(q.i, q.n) * q.dist.pdf(x) * std::pow(F, q.n - q.i) * std::pow(1.0 - F, q.i - 1);
}

double expected_order_stat(const OrderStatQuery& q, const NumericConfig& cfg) {
    check_query(q);
    return integrate_against_order_stat(q, cfg, [](double x) { return x; });
}

double expected_hazard_order(const OrderStatQuery& q, const NumericConfig& cfg) {
    check_query(q);
    double direct;
    try {
        direct = integrate_against_order_stat(q, cfg, [&](double x) { return q.dist.hazard(x); });
    } catch (const UndefinedValueError& e) {
        // Divergent at the top of a bounded support (i = 1 there).
        throw NumericFailure(std::string("h_i^n integrand undefined for ") + q.dist.spec() + ": " + e.what());
    }
    if (q.i == 2) {
        // Second route: h_2^n = n * E[f(X_1^{n-1})].
        OrderStatQuery top{q.dist, 1, q.n - 1};
        const double via_top =
            q.n * integrate_against_order_stat(top, cfg, [&](double x) { return q.dist.pdf(x); });
        const double scale = std::max({1.0, std::abs(direct), std::abs(via_top)});
        if (std::abs(direct - via_top) > 1e-6 * scale)
            throw NumericFailure("h_2^n route disagreement for " + q.dist.spec() + ": " +
                                 std::to_string(direct) + " vs " + std::to_string(via_top));
    }
    return direct;
}

double expected_inverse_hazard_order(const OrderStatQuery& q, const NumericConfig& cfg) {
    check_query(q);
    return integrate_against_order_stat(q, cfg, [&](double x) {
        const double f = q.dist.pdf(x);
        if (!(f > 0.0)) return 0.0;  // survival vanishes with the density at a bounded top
        return q.dist.survival(x) / f;
    });
}

}  // namespace marketeq
