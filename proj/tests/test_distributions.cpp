#include <doctest.h>

#include <cmath>

#include "marketeq/distribution.hpp"
#include "marketeq/quadrature.hpp"
#include "marketeq/rng.hpp"
#include "oracles.hpp"

using namespace marketeq;

namespace {
const NumericConfig cfg;

std::vector<Distribution> builtins() {
    return {make_exponential(1.0),  make_exponential(3.0),      make_uniform(0.0, 1.0),
            make_uniform(0.0, 2.0), make_half_normal(1.0),      make_epsk(0.1, 2.0),
            make_epsk(0.02, 4.0 / 3.0), make_piecewise_exp(0.5, 2.0, 0.3)};
}
}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("spec grammar accepts named and positional parameters") {
    CHECK(make_distribution("exp(rate=1)").spec() == "exp(rate=1)");
    CHECK(make_distribution("exp(1)").spec() == "exp(rate=1)");
    CHECK(make_distribution("uniform(0,1)").spec() == "uniform(lo=0,hi=1)");
    CHECK(make_distribution("uniform(hi=2, lo=0.5)").spec() == "uniform(lo=0.5,hi=2)");
    CHECK(make_distribution(" epsk( eps = 0.1 , k = 2 ) ").spec() == "epsk(eps=0.1,k=2)");
    CHECK(make_distribution("pwexp(0.5,2,0.3)").spec() == "pwexp(h1=0.5,h2=2,mass1=0.3)");
    CHECK(make_distribution("halfnormal(sigma=1.5e0)").spec() == "halfnormal(sigma=1.5)");
}

TEST_CASE("spec grammar rejects malformed input") {
    CHECK_THROWS_AS(make_distribution("exp"), InvalidSpecError);
    CHECK_THROWS_AS(make_distribution("exp(rate=)"), InvalidSpecError);
    CHECK_THROWS_AS(make_distribution("exp(rate=1"), InvalidSpecError);
    CHECK_THROWS_AS(make_distribution("gamma(2)"), InvalidSpecError);
    CHECK_THROWS_AS(make_distribution("exp(rate=1,rate=2)"), InvalidSpecError);
    CHECK_THROWS_AS(make_distribution("uniform(0)"), InvalidSpecError);
    CHECK_THROWS_AS(make_distribution("exp(scale=1)"), InvalidSpecError);
}

TEST_CASE("parameter ranges are validated") {
    CHECK_THROWS_AS(make_distribution("exp(rate=0)"), InvalidParameterError);
    CHECK_THROWS_AS(make_distribution("exp(-1)"), InvalidParameterError);
    CHECK_THROWS_AS(make_distribution("uniform(1,1)"), InvalidParameterError);
    CHECK_THROWS_AS(make_distribution("uniform(-0.5,1)"), InvalidParameterError);
    CHECK_THROWS_AS(make_distribution("pwexp(1,1,0)"), InvalidParameterError);
    CHECK_THROWS_AS(make_distribution("pwexp(1,1,1)"), InvalidParameterError);
    CHECK_THROWS_AS(make_distribution("epsk(0.1,1)"), InvalidParameterError);
    CHECK_THROWS_AS(make_distribution("halfnormal(0)"), InvalidParameterError);
}

TEST_CASE("quantile and cdf round trip") {
    SplitMix64 rng(42);
    for (const Distribution& d : builtins()) {
        for (int t = 0; t < 1000; ++t) {
            const double u = rng.next_u01();
            const double x = d.quantile(u);
            CHECK(std::abs(d.cdf(x) - u) <= 1e-8);
            CHECK(std::abs(d.quantile(d.cdf(x)) - x) <= 1e-8 * std::max(1.0, std::abs(x)));
        }
    }
}

TEST_CASE("pdf integrates to one over the truncated support") {
    for (const Distribution& d : builtins()) {
        const double mass =
            integrate([&](double x) { return d.pdf(x); }, d.support_lo(),
                      d.upper_integration_limit(cfg.truncation_quantile), d.discontinuities(), 1e-12, 1e-11);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("pdf_prime agrees with central finite differences away from jumps") {
    SplitMix64 rng(7);
    for (const Distribution& d : builtins()) {
        for (int t = 0; t < 50; ++t) {
            const double u = 0.01 + 0.97 * rng.next_u01();
            const double x = d.quantile(u);
            double clearance = 1e9;
            for (double s : d.discontinuities()) clearance = std::min(clearance, std::abs(x - s));
            const double h = 1e-6 * std::max(1.0, std::abs(x));
            if (clearance < 4.0 * h) continue;
            if (d.bounded() && (x - h < d.support_lo() || x + h > d.support_hi())) continue;
            const double fd = (d.pdf(x + h) - d.pdf(x - h)) / (2.0 * h);
            const double analytic = d.pdf_prime(x);
            if (std::abs(analytic) < 1e-12) {
                CHECK(std::abs(fd) <= 1e-6);
            } else {
                CHECK(fd == doctest::Approx(analytic).epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("hazard closed forms") {
    CHECK(make_exponential(2.5).hazard(1.7) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(make_uniform(0, 1).hazard(0.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(make_epsk(0.1, 2.0).hazard(1.0) == doctest::Approx(0.1).epsilon(1e-14));
    const Distribution hn = make_half_normal(1.0);
    CHECK(hn.hazard(0.0) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    CHECK_THROWS_AS(make_uniform(0, 1).hazard(1.0), UndefinedValueError);
}

TEST_CASE("virtual value examples") {
    CHECK(std::abs(virtual_value(make_exponential(1.0), 1.0)) <= 1e-14);
    CHECK(virtual_value(make_uniform(0, 1), 0.25) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(std::abs(virtual_value(make_uniform(0, 1), 0.5)) <= 1e-14);
    CHECK_THROWS_AS(virtual_value(make_uniform(0, 1), 1.5), UndefinedValueError);
}

TEST_CASE("virtual value zero equals the revenue maximizer") {
    CHECK(virtual_value_inverse_zero(make_uniform(0, 1), cfg) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(virtual_value_inverse_zero(make_exponential(1.0), cfg) == doctest::Approx(1.0).epsilon(1e-8));

    // Two-piece family: the revenue maximizer sits at the hazard jump.
    const Distribution epsk = make_epsk(0.1, 2.0);
    const double by_oracle = oracles::monopoly_price(epsk, 40.0);
    CHECK(virtual_value_inverse_zero(epsk, cfg) == doctest::Approx(by_oracle).epsilon(1e-5));
    CHECK(by_oracle == doctest::Approx(std::log(2.0) / 0.1).epsilon(1e-5));
}

TEST_CASE("regular route and grid fallback agree on regular built-ins") {
    for (const Distribution& d : builtins()) {
        if (!classify(d, cfg).regular.pass) continue;
        const double root = virtual_value_inverse_zero(d, cfg);
        const double grid = revenue_maximizer_grid(d, cfg);
        CHECK(std::abs(root - grid) <= 1e-6 * std::max(1.0, std::abs(root)));
    }
}

TEST_CASE("classification of the reference families") {
    const Classification e = classify(make_exponential(1.0), cfg);
    CHECK(e.regular.pass);
    CHECK(e.mhr.pass);
    CHECK(e.mhr_plus.pass);
    CHECK(e.decreasing_density.pass);
    CHECK(e.mhr_plus_c == doctest::Approx(1.0));

    const Classification u = classify(make_uniform(0, 2), cfg);
    CHECK(u.mhr_plus.pass);
    CHECK(u.decreasing_density.pass);
    CHECK(u.mhr_plus_c == doctest::Approx(0.5));

    const Classification ek = classify(make_epsk(0.1, 2.0), cfg);
    CHECK(ek.regular.pass);
    CHECK(ek.mhr.pass);
    CHECK_FALSE(ek.mhr_plus.pass);

    // Density jumps up at the threshold, so decreasing density fails there
    // and the tail slope exceeds c*f.
    const Classification ek2 = classify(make_epsk(0.02, 4.0 / 3.0), cfg);
    CHECK(ek2.mhr.pass);
    CHECK_FALSE(ek2.mhr_plus.pass);
    CHECK_FALSE(ek2.decreasing_density.pass);
    const double threshold = std::log(4.0) / 0.02;
    CHECK(*ek2.decreasing_density.witness == doctest::Approx(threshold).epsilon(1e-9));

    // The half-normal is MHR with decreasing density but not MHR+:
    // -f'/f = x grows without bound while c must stay below the hazard floor.
    const Classification hn = classify(make_half_normal(1.0), cfg);
    CHECK(hn.regular.pass);
    CHECK(hn.mhr.pass);
    CHECK(hn.decreasing_density.pass);
    CHECK_FALSE(hn.mhr_plus.pass);
    CHECK(*hn.mhr_plus.witness == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.05));

    // Downward hazard jump: caught by the cross-jump check.
    const Classification down = classify(make_piecewise_exp(2.0, 0.5, 0.5), cfg);
    CHECK_FALSE(down.mhr.pass);
    CHECK_FALSE(down.mhr_plus.pass);
}

TEST_CASE("class nesting holds across random parameterizations") {
    SplitMix64 rng(1729);
    std::vector<Distribution> pool = builtins();
    for (int t = 0; t < 100; ++t) {
        switch (rng.next() % 4) {
            case 0: pool.push_back(make_exponential(rng.next_in(0.2, 5.0))); break;
            case 1: pool.push_back(make_uniform(0.0, rng.next_in(0.3, 4.0))); break;
            case 2: pool.push_back(make_half_normal(rng.next_in(0.3, 3.0))); break;
            default:
                pool.push_back(
                    make_piecewise_exp(rng.next_in(0.05, 3.0), rng.next_in(0.05, 3.0), rng.next_in(0.05, 0.95)));
        }
    }
    for (const Distribution& d : pool) {
        const Classification c = classify(d, cfg);
        if (c.mhr_plus.pass) CHECK(c.mhr.pass);
        if (c.mhr.pass) CHECK(c.regular.pass);
    }
}

TEST_CASE("virtual value is nondecreasing on the grid for regular built-ins") {
    for (const Distribution& d : builtins()) {
        if (!classify(d, cfg).regular.pass) continue;
        double prev = -1e300;
        for (int j = 0; j < 500; ++j) {
            const double u = 0.999 * j / 499.0;
            const double x = j == 0 ? d.support_lo() : d.quantile(u);
            if (!(d.pdf(x) > 0.0)) continue;
            const double phi = virtual_value(d, x);
            CHECK(phi >= prev - 1e-10 * std::max(1.0, std::abs(prev)));
            prev = phi;
        }
    }
}

TEST_CASE("two-piece family with equal hazards matches the exponential") {
    const Distribution pw = make_piecewise_exp(0.7, 0.7, 0.4);
    const Distribution ex = make_exponential(0.7);
    for (double x : {0.0, 0.1, 0.5, 0.7293, 1.5, 3.0, 8.0}) {
        CHECK(pw.cdf(x) == doctest::Approx(ex.cdf(x)).epsilon(1e-12));
        CHECK(pw.pdf(x) == doctest::Approx(ex.pdf(x)).epsilon(1e-12));
    }
    CHECK(pw.discontinuities().empty());
}

TEST_CASE("epsk threshold carries the low-region mass 1/k") {
    const Distribution d = make_epsk(0.02, 4.0 / 3.0);
    const double threshold = std::log(4.0) / 0.02;
    CHECK(d.discontinuities().size() == 1);
    CHECK(d.discontinuities()[0] == doctest::Approx(threshold).epsilon(1e-12));
    CHECK(d.cdf(threshold) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(make_epsk(0.1, 2.0).discontinuities()[0] == doctest::Approx(std::log(2.0) / 0.1).epsilon(1e-12));

    // One-sided density limits at the jump: h1*(1-m) from the left,
    // h2*(1-m) from the right.
    CHECK(d.pdf(threshold) == doctest::Approx(0.02 * 0.25).epsilon(1e-12));
    CHECK(d.pdf_right(threshold) == doctest::Approx(0.25).epsilon(1e-12));
}

}  // TEST_SUITE
