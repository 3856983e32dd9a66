#include "marketeq/star.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "marketeq/quadrature.hpp"

namespace marketeq {

namespace {

// Critical x-locations of one marginal: support edges and pdf jumps.
void append_criticals(const Distribution& d, double shift, double trunc, std::vector<double>& out) {
    out.push_back(d.support_lo() + shift);
    if (d.bounded()) out.push_back(d.support_hi() + shift);
    out.push_back(d.upper_integration_limit(trunc) + shift);
    for (double s : d.discontinuities()) out.push_back(s + shift);
}

}  // namespace

StarDistribution::StarDistribution(std::vector<Distribution> marginals, int provider,
                                   std::vector<double> peer_prices, NumericConfig cfg, bool force_general_kernel)
    : marginals_(std::move(marginals)), provider_(provider), peer_prices_(std::move(peer_prices)), cfg_(cfg) {
    const int n = static_cast<int>(marginals_.size());
    if (n < 2) throw InvalidParameterError("star operation requires n >= 2 providers");
    if (provider_ < 0 || provider_ >= n) throw InvalidParameterError("star: provider index out of range");
    if (static_cast<int>(peer_prices_.size()) != n - 1)
        throw InvalidParameterError("star: expected n-1 peer prices");
    for (double p : peer_prices_)
        if (!(p >= 0.0)) throw InvalidParameterError("star: peer prices must be >= 0");
    for (int j = 0; j < n; ++j)
        if (j != provider_) peer_global_.push_back(j);
    min_peer_ = *std::min_element(peer_prices_.begin(), peer_prices_.end());

    symmetric_ = !force_general_kernel;
    for (int j = 1; symmetric_ && j < n; ++j)
        if (!marginals_[static_cast<std::size_t>(j)].same_as(marginals_[0])) symmetric_ = false;
    for (double p : peer_prices_)
        if (p != peer_prices_[0]) symmetric_ = false;
}

StarDistribution::StarDistribution(const Distribution& d, int n, double peer_price, const NumericConfig& cfg)
    : StarDistribution(std::vector<Distribution>(static_cast<std::size_t>(n), d), 0,
                       std::vector<double>(static_cast<std::size_t>(n - 1), peer_price), cfg) {}

double StarDistribution::kernel_g(double q, double x) const {
    const std::size_t m = peer_prices_.size();
    if (symmetric_) {
        const Distribution& d = marginals_[0];
        const double y = x - q + peer_prices_[0];
        if (y < d.support_lo()) return 0.0;
        const double F = d.cdf(y);
        return static_cast<double>(m) * d.pdf(y) * std::pow(F, static_cast<double>(m - 1));
    }
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const Distribution& dj = marginals_[static_cast<std::size_t>(peer_global_[j])];
        double term = dj.pdf(x - q + peer_prices_[j]);
        if (term == 0.0) continue;
        for (std::size_t k = 0; k < m && term != 0.0; ++k) {
            if (k == j) continue;
            const Distribution& dk = marginals_[static_cast<std::size_t>(peer_global_[k])];
            term *= dk.cdf(x - q + peer_prices_[k]);
        }
        total += term;
    }
    return total;
}

std::vector<double> StarDistribution::panel_points(double q, double a, double b) const {
    std::vector<double> pts;
    append_criticals(marginals_[static_cast<std::size_t>(provider_)], 0.0, cfg_.truncation_quantile, pts);
    for (std::size_t j = 0; j < peer_prices_.size(); ++j)
        append_criticals(marginals_[static_cast<std::size_t>(peer_global_[j])], q - peer_prices_[j],
                         cfg_.truncation_quantile, pts);
    pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double x) { return !(x > a && x < b); }), pts.end());
    return pts;
}

double StarDistribution::integrate_weighted(double q, int weight_kind) const {
    const Distribution& own = marginals_[static_cast<std::size_t>(provider_)];
    const double M = std::max(0.0, q - min_peer_);
    double upper = own.upper_integration_limit(cfg_.truncation_quantile);
    for (std::size_t j = 0; j < peer_prices_.size(); ++j) {
        const Distribution& dj = marginals_[static_cast<std::size_t>(peer_global_[j])];
        upper = std::max(upper, dj.upper_integration_limit(cfg_.truncation_quantile) + q - peer_prices_[j]);
    }
    if (!(upper > M)) return 0.0;

    const auto integrand = [&](double x) {
        const double w = weight_kind == 0   ? own.survival(x)
                         : weight_kind == 1 ? own.pdf(x)
                                            : own.pdf_prime(x);
        return w == 0.0 ? 0.0 : w * kernel_g(q, x);
    };
    return integrate(integrand, M, upper, panel_points(q, M, upper), cfg_.quad_abs_tol, cfg_.quad_rel_tol);
}

double StarDistribution::survival(double q) const {
    // Boundary mass: the chance every peer's shifted value sits below M,
    // i.e. prod_j F_j(M - q + p_j). Nonzero only when M = 0 (q below the
    // cheapest peer); at M = q - min p the cheapest peer's factor is F(0) = 0.
    const double M = std::max(0.0, q - min_peer_);
    double boundary = 1.0;
    for (std::size_t j = 0; j < peer_prices_.size() && boundary != 0.0; ++j)
        boundary *= marginals_[static_cast<std::size_t>(peer_global_[j])].cdf(M - q + peer_prices_[j]);
    return integrate_weighted(q, 0) + boundary;
}

double StarDistribution::survival_direct(double q) const {
    const Distribution& own = marginals_[static_cast<std::size_t>(provider_)];
    const double a = own.support_lo();
    const double b = own.upper_integration_limit(cfg_.truncation_quantile);
    const auto integrand = [&](double x) {
        double term = own.pdf(x);
        for (std::size_t j = 0; j < peer_prices_.size() && term != 0.0; ++j)
            term *= marginals_[static_cast<std::size_t>(peer_global_[j])].cdf(x - q + peer_prices_[j]);
        return term;
    };
    return integrate(integrand, a, b, panel_points(q, a, b), cfg_.quad_abs_tol, cfg_.quad_rel_tol);
}

double StarDistribution::pdf(double q) const { return integrate_weighted(q, 1); }

double StarDistribution::pdf_prime(double q) const {
    const Distribution& own = marginals_[static_cast<std::size_t>(provider_)];
    const double M = std::max(0.0, q - min_peer_);
    double value = integrate_weighted(q, 2);

    // Density jumps of the own marginal act as point masses of f'. Kernel
    // arguments are taken from the side reached as q decreases, which makes
    // the result the left q-derivative at kink prices.
    const auto jump_term = [&](double s, double delta) {
        if (s < M || delta == 0.0) return 0.0;
        const std::size_t m = peer_prices_.size();
        double g = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const Distribution& dj = marginals_[static_cast<std::size_t>(peer_global_[j])];
            double term = dj.pdf_right(s - q + peer_prices_[j]);
            if (term == 0.0) continue;
            for (std::size_t k = 0; k < m && term != 0.0; ++k) {
                if (k == j) continue;
                const Distribution& dk = marginals_[static_cast<std::size_t>(peer_global_[k])];
                term *= dk.cdf(s - q + peer_prices_[k]);
            }
            g += term;
        }
        return delta * g;
    };

    value += jump_term(own.support_lo(), own.pdf_right(own.support_lo()));
    for (double s : own.discontinuities()) value += jump_term(s, own.pdf_right(s) - own.pdf(s));
    if (own.bounded()) value += jump_term(own.support_hi(), -own.pdf(own.support_hi()));
    return value;
}

double StarDistribution::hazard(double q) const {
    const double s = survival(q);
    if (!(s > 0.0)) throw UndefinedValueError("star hazard undefined: survival is zero at q = " + std::to_string(q));
    return pdf(q) / s;
}

double StarDistribution::virtual_value(double q) const {
    const double f = pdf(q);
    if (!(f > 0.0))
        throw UndefinedValueError("star virtual value undefined: density is zero at q = " + std::to_string(q));
    return q - survival(q) / f;
}

MhrCheck StarDistribution::is_mhr(double q_lo, double q_hi, int points) const {
    MhrCheck out;
    if (points < 2 || !(q_hi > q_lo)) throw InvalidParameterError("is_mhr: bad grid");
    for (int j = 0; j < points; ++j) {
        const double q = q_lo + (q_hi - q_lo) * j / (points - 1);
        const double f = pdf(q);
        const double fp = pdf_prime(q);
        const double S = survival(q);
        const double lhs = f * f;
        const double rhs = -fp * S;
        if (lhs - rhs < -std::max(1e-9, 1e-9 * std::max(lhs, std::abs(rhs)))) {
            out.pass = false;
            out.witness = q;
            return out;
        }
    }
    return out;
}

double StarDistribution::search_upper_bound(double floor) const {
    double q = std::max(1.0, 2.0 * min_peer_);
    int doublings = 0;
    while (survival(q) > floor) {
        q *= 2.0;
        if (++doublings > 60) throw NumericFailure("star survival does not decay");
    }
    double lo = q * 0.5, hi = q;
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        (survival(mid) > floor ? lo : hi) = mid;
    }
    return hi;
}

double expected_winner_value(const std::vector<Distribution>& marginals, const std::vector<double>& prices,
                             const NumericConfig& cfg) {
    const int n = static_cast<int>(marginals.size());
    if (static_cast<int>(prices.size()) != n) throw InvalidParameterError("prices/marginals size mismatch");
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const Distribution& di = marginals[static_cast<std::size_t>(i)];
        const double a = di.support_lo();
        double b = di.upper_integration_limit(cfg.truncation_quantile);
        std::vector<double> pts;
        append_criticals(di, 0.0, cfg.truncation_quantile, pts);
        for (int j = 0; j < n; ++j)
            if (j != i) append_criticals(marginals[static_cast<std::size_t>(j)], prices[i] - prices[j],
                                         cfg.truncation_quantile, pts);
        pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double x) { return !(x > a && x < b); }), pts.end());
        const auto integrand = [&](double x) {
            double term = x * di.pdf(x);
            for (int j = 0; j < n && term != 0.0; ++j)
                if (j != i) term *= marginals[static_cast<std::size_t>(j)].cdf(x - prices[i] + prices[j]);
            return term;
        };
        total += integrate(integrand, a, b, pts, cfg.quad_abs_tol, cfg.quad_rel_tol);
    }
    return total;
}

}  // namespace marketeq
