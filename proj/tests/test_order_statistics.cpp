#include <doctest.h>

#include <cmath>

#include "marketeq/montecarlo.hpp"
#include "marketeq/order_statistics.hpp"
#include "marketeq/rng.hpp"
#include "oracles.hpp"

using namespace marketeq;

namespace {
const NumericConfig cfg;

// Direct sampling estimate of E[w(X_i^n)] with standard error.
template <class W>
std::pair<double, double> mc_order_stat(const Distribution& d, int i, int n, const W& w, long long N,
                                        std::uint64_t seed) {
    double sum = 0.0, sum2 = 0.0;
    for (long long c = 0; c < N; ++c) {
        double top = -1e300, second = -1e300;
        for (int j = 0; j < n; ++j) {
            const double v = d.sample(counter_uniform(seed, static_cast<std::uint64_t>(c),
                                                      static_cast<std::uint64_t>(j)));
            if (v > top) {
                second = top;
                top = v;
            } else if (v > second) {
                second = v;
            }
        }
        const double x = (i == 1) ? top : second;
        const double y = w(x);
        sum += y;
        sum2 += y * y;
    }
    const double mean = sum / N;
    const double var = std::max(0.0, (sum2 - N * mean * mean) / (N - 1.0));
    return {mean, std::sqrt(var / N)};
}
}  // namespace

TEST_SUITE("order_statistics") {

TEST_CASE("order statistic density closed forms") {
    OrderStatQuery top2{make_uniform(0, 1), 1, 2};
    CHECK(order_stat_density(top2, 0.5) == doctest::Approx(1.0).epsilon(1e-12));  // 2x at 0.5

    OrderStatQuery single{make_exponential(1.0), 1, 1};
    CHECK(order_stat_density(single, 0.3) == doctest::Approx(std::exp(-0.3)).epsilon(1e-12));

    OrderStatQuery min2{make_exponential(1.0), 2, 2};
    CHECK(order_stat_density(min2, 0.0) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(order_stat_density({make_exponential(1.0), 3, 2}, 0.5), InvalidParameterError);
}

TEST_CASE("expected order statistics match closed forms") {
    CHECK(expected_order_stat({make_uniform(0, 1), 1, 2}, cfg) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(expected_order_stat({make_exponential(1.0), 1, 2}, cfg) == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(expected_order_stat({make_exponential(1.0), 1, 1}, cfg) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(expected_order_stat({make_uniform(0, 2), 1, 1}, cfg) == doctest::Approx(1.0).epsilon(1e-9));
    for (int n : {2, 3, 5}) {
        CHECK(expected_order_stat({make_uniform(0, 1), 1, n}, cfg) ==
              doctest::Approx(double(n) / (n + 1)).epsilon(1e-9));
        CHECK(expected_order_stat({make_exponential(2.0), 1, n}, cfg) ==
              doctest::Approx(0.5 * oracles::harmonic(n)).epsilon(1e-9));
    }
}

TEST_CASE("expected hazard of the second highest") {
    for (int n : {2, 3, 5}) {
        CHECK(expected_hazard_order({make_exponential(0.5), 2, n}, cfg) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(expected_hazard_order({make_uniform(0, 1), 2, n}, cfg) == doctest::Approx(double(n)).epsilon(1e-9));
    }
    CHECK(expected_hazard_order({make_epsk(0.1, 2.0), 2, 2}, cfg) == doctest::Approx(0.325).epsilon(1e-10));
}

TEST_CASE("expected inverse hazard") {
    CHECK(expected_inverse_hazard_order({make_exponential(2.0), 1, 4}, cfg) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(expected_inverse_hazard_order({make_uniform(0, 1), 1, 2}, cfg) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(expected_inverse_hazard_order({make_epsk(0.02, 4.0 / 3.0), 1, 2}, cfg) ==
          doctest::Approx(28.5625).epsilon(1e-8));
}

TEST_CASE("two-piece closed forms across ranks and draw counts") {
    const double eps = 0.1, k = 2.0;
    const Distribution d = make_epsk(eps, k);
    for (int n : {2, 3, 5}) {
        for (int i : {1, 2}) {
            const double h = expected_hazard_order({d, i, n}, cfg);
            const double H = expected_inverse_hazard_order({d, i, n}, cfg);
            CHECK(h == doctest::Approx(oracles::pwexp_expected_hazard(eps, 1.0, 0.5, i, n)).epsilon(1e-8));
            CHECK(H == doctest::Approx(oracles::pwexp_expected_inverse_hazard(eps, 1.0, 0.5, i, n)).epsilon(1e-8));
        }
    }
}

TEST_CASE("Myerson identity: V2 = V1 - H1") {
    const std::vector<Distribution> dists = {make_exponential(1.0), make_exponential(3.0), make_uniform(0, 1),
                                             make_uniform(0, 2),    make_half_normal(1.0), make_epsk(0.1, 2.0)};
    for (const Distribution& d : dists) {
        for (int n : {2, 3, 5}) {
            const double v1 = expected_order_stat({d, 1, n}, cfg);
            const double v2 = expected_order_stat({d, 2, n}, cfg);
            const double H1 = expected_inverse_hazard_order({d, 1, n}, cfg);
            CHECK(std::abs(v2 - (v1 - H1)) <= 1e-6 * std::max(1.0, std::abs(v1)));
        }
    }
}

TEST_CASE("coupling identity: V1^{n-1} = (n-1)/n V1^n + V2^n/n") {
    const std::vector<Distribution> dists = {make_exponential(1.0), make_uniform(0, 2), make_half_normal(1.0),
                                             make_epsk(0.02, 4.0 / 3.0)};
    for (const Distribution& d : dists) {
        for (int n : {2, 3, 5}) {
            const double v1n = expected_order_stat({d, 1, n}, cfg);
            const double v2n = expected_order_stat({d, 2, n}, cfg);
            const double v1m = expected_order_stat({d, 1, n - 1}, cfg);
            const double coupled = (n - 1.0) / n * v1n + v2n / n;
            CHECK(std::abs(v1m - coupled) <= 1e-6 * std::max(1.0, std::abs(v1m)));
        }
    }
}

TEST_CASE("H_2^n is weakly decreasing in n for MHR built-ins") {
    for (const Distribution& d : {make_exponential(1.0), make_uniform(0, 1), make_half_normal(1.0),
                                  make_epsk(0.1, 2.0)}) {
        double prev = expected_inverse_hazard_order({d, 2, 2}, cfg);
        for (int n = 3; n <= 6; ++n) {
            const double cur = expected_inverse_hazard_order({d, 2, n}, cfg);
            CHECK(cur <= prev + 1e-8);
            prev = cur;
        }
    }
}

TEST_CASE("uniform h_1^n diverges and reports a numeric failure") {
    CHECK_THROWS_AS(expected_hazard_order({make_uniform(0, 1), 1, 3}, cfg), NumericFailure);
}

TEST_CASE("Monte Carlo agreement at one million samples") {
    const long long N = 1000000;
    struct Case {
        Distribution d;
        int i, n;
    };
    const Case cases[] = {{make_half_normal(1.0), 1, 3}, {make_epsk(0.1, 2.0), 2, 2}, {make_uniform(0, 2), 2, 3}};
    int slot = 0;
    for (const Case& c : cases) {
        const std::uint64_t seed = 901 + slot++;
        const auto [v_mc, v_se] = mc_order_stat(c.d, c.i, c.n, [](double x) { return x; }, N, seed);
        CHECK(std::abs(expected_order_stat({c.d, c.i, c.n}, cfg) - v_mc) <= 4.0 * v_se);

        const auto [h_mc, h_se] =
            mc_order_stat(c.d, c.i, c.n, [&](double x) { return c.d.hazard(x); }, N, seed + 100);
        CHECK(std::abs(expected_hazard_order({c.d, c.i, c.n}, cfg) - h_mc) <= 4.0 * h_se);

        const auto [H_mc, H_se] = mc_order_stat(
            c.d, c.i, c.n, [&](double x) { return c.d.survival(x) / c.d.pdf(x); }, N, seed + 200);
        CHECK(std::abs(expected_inverse_hazard_order({c.d, c.i, c.n}, cfg) - H_mc) <= 4.0 * H_se);
    }
}

}  // TEST_SUITE
