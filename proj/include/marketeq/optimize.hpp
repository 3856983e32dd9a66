#pragma once

#include <cmath>
#include <utility>

#include "marketeq/errors.hpp"

namespace marketeq {

/// Golden-section maximization on [a,b]. Assumes a single interior maximum
/// within the bracket; callers locate the bracket with a coarse grid first.
template <class F>
std::pair<double, double> golden_section_max(const F& f, double a, double b, double xtol,
                                             int max_iter = 200) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

/// Bisection for a root of f in [a,b] with f(a), f(b) of opposite sign
/// (supplied to avoid re-evaluation). Converges on the sign change even when
/// f jumps across zero, in which case the jump point is returned.
template <class F>
double bisect_root(const F& f, double a, double b, double fa, double fb, double xtol,
                   int max_iter = 200) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw NumericFailure("bisection bracket does not change sign");
    for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace marketeq
