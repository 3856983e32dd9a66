#pragma once

#include "marketeq/config.hpp"
#include "marketeq/distribution.hpp"

namespace marketeq {

/// The i-th highest of n i.i.d. draws (i = 1 is the maximum).
struct OrderStatQuery {
    Distribution dist;
    int i = 1;
    int n = 1;
};

/// n!/((i-1)!(n-i)!) * f(x) * F(x)^(n-i) * (1-F(x))^(i-1).
double order_stat_density(const OrderStatQuery& q, double x);

/// V_i^n: expected value of the i-th highest of n draws.
double expected_order_stat(const OrderStatQuery& q, const NumericConfig& cfg);

/// h_i^n: expected hazard rate at the i-th highest of n draws. For i = 2 the
/// result is cross-checked against n*E[f(X_1^{n-1})]; disagreement beyond
/// relative 1e-6 raises NumericFailure.
double expected_hazard_order(const OrderStatQuery& q, const NumericConfig& cfg);

/// H_i^n: expected inverse hazard rate at the i-th highest of n draws.
double expected_inverse_hazard_order(const OrderStatQuery& q, const NumericConfig& cfg);

}  // namespace marketeq
