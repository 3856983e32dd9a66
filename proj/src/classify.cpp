#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "marketeq/distribution.hpp"

namespace marketeq {

namespace {

constexpr double kClassTol = 1e-9;

struct Point {
    double x;
    bool right_side;  // evaluate pdf and pdf_prime from the right
};

void fail(Verdict& v, double x) {
    if (v.pass) {
        v.pass = false;
        v.witness = x;
    }
}

}  // namespace

Classification classify(const Distribution& d, const NumericConfig& cfg) {
    cfg.validate();
    Classification out;
    const double lo = d.support_lo();
    const double c = d.pdf_right(lo);  // MHR+ constant, condition (7)
    out.mhr_plus_c = c;

    // Quantile-spaced grid stopping just short of cdf = 1, plus both sides
    // of every declared jump.
    const int n = cfg.grid_points;
    const double u_max = std::min(cfg.truncation_quantile, 1.0 - 1e-9);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n) + 2 * d.discontinuities().size());
    for (int j = 0; j < n; ++j) {
        const double u = u_max * j / (n - 1);
        pts.push_back({j == 0 ? lo : d.quantile(u), false});
    }
    for (double s : d.discontinuities()) {
        pts.push_back({s, false});
        pts.push_back({s, true});
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.right_side < b.right_side);
    });

    for (const Point& pt : pts) {
        const double f = pt.right_side ? d.pdf_right(pt.x) : d.pdf(pt.x);
        const double fp = pt.right_side ? d.pdf_prime_right(pt.x) : d.pdf_prime(pt.x);
        const double S = d.survival(pt.x);
        if (!std::isfinite(f) || !std::isfinite(fp) || !std::isfinite(S)) {
            fail(out.regular, pt.x);
            fail(out.mhr, pt.x);
            fail(out.mhr_plus, pt.x);
            fail(out.decreasing_density, pt.x);
            continue;
        }
        const double f2 = f * f;
        const double slope_term = fp * S;  // >= -f(x)^2 is the MHR inequality
        const double scale_mhr = std::max({1.0, f2, std::abs(slope_term)});
        if (f2 + slope_term < -kClassTol * scale_mhr) fail(out.mhr, pt.x);
        if (2.0 * f2 + slope_term < -kClassTol * std::max(scale_mhr, 2.0 * f2)) fail(out.regular, pt.x);

        const double scale_plus = std::max({1.0, f * c, std::abs(fp)});
        const double h = S > 0.0 ? f / S : std::numeric_limits<double>::infinity();
        if (f * c + fp < -kClassTol * scale_plus || h < c - kClassTol * std::max(1.0, c))
            fail(out.mhr_plus, pt.x);

        if (fp > kClassTol * std::max(1.0, std::abs(fp))) fail(out.decreasing_density, pt.x);
    }

    // Cross-jump checks. One-sided derivatives cannot see the jump itself:
    // a hazard drop fails MHR and regularity, a density rise fails
    // decreasing density.
    for (double s : d.discontinuities()) {
        const double S = d.survival(s);
        if (!(S > 0.0)) continue;
        const double h_left = d.pdf(s) / S;
        const double h_right = d.pdf_right(s) / S;
        const double scale = std::max({1.0, h_left, h_right});
        if (h_right < h_left - kClassTol * scale) {
            fail(out.mhr, s);
            fail(out.regular, s);
        }
        const double f_left = d.pdf(s), f_right = d.pdf_right(s);
        if (f_right > f_left + kClassTol * std::max({1.0, f_left, f_right}))
            fail(out.decreasing_density, s);
    }

    // Nesting is structural: MHR+ additionally requires the MHR verdict.
    if (!out.mhr.pass && out.mhr_plus.pass) {
        out.mhr_plus.pass = false;
        out.mhr_plus.witness = out.mhr.witness;
    }
    return out;
}

}  // namespace marketeq
