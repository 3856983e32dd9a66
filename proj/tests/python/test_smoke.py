"""Smoke tests for the python bindings."""

import math

import pytest

import marketeq as mq


def test_distribution_roundtrip():
    d = mq.make_distribution("exp(rate=1)")
    assert d.spec() == "exp(rate=1)"
    assert d.cdf(1.0) == pytest.approx(1.0 - math.exp(-1.0))
    assert d.hazard(3.7) == pytest.approx(1.0)
    assert d.quantile(d.cdf(0.8)) == pytest.approx(0.8)


def test_invalid_spec_raises():
    with pytest.raises(mq.InvalidSpecError):
        mq.make_distribution("nope(1)")
    with pytest.raises(mq.InvalidParameterError):
        mq.make_distribution("exp(rate=-2)")


def test_classify_verdicts():
    cls = mq.classify(mq.make_distribution("epsk(eps=0.1,k=2)"))
    assert cls["mhr"]["pass"] is True
    assert cls["mhr_plus"]["pass"] is False
    assert cls["regular"]["pass"] is True


def test_order_statistics():
    u = mq.make_distribution("uniform(0,1)")
    assert mq.expected_order_stat(u, 1, 2) == pytest.approx(2.0 / 3.0, abs=1e-9)
    assert mq.expected_hazard_order(u, 2, 3) == pytest.approx(3.0, abs=1e-9)
    ek = mq.make_distribution("epsk(eps=0.1,k=2)")
    assert mq.expected_hazard_order(ek, 2, 2) == pytest.approx(0.325, abs=1e-9)


def test_star_and_candidate():
    d = mq.make_distribution("exp(1)")
    star = mq.StarDistribution(d, 2, 1.0)
    assert star.survival(1.0) == pytest.approx(0.5, abs=1e-8)
    assert mq.free_market_candidate(d, 2) == pytest.approx(1.0, abs=1e-9)


def test_equilibrium_verdicts():
    rep = mq.verify_symmetric_equilibrium(mq.make_distribution("uniform(0,1)"), 2)
    assert rep["verdict"] == "equilibrium"
    assert rep["candidate_prices"][0] == pytest.approx(0.5, abs=1e-8)

    bad = mq.verify_symmetric_equilibrium(mq.make_distribution("epsk(eps=0.1,k=2)"), 2)
    assert bad["verdict"] == "not-equilibrium"


def test_policy_comparison():
    cmp = mq.compare_policies(mq.make_distribution("uniform(0,1)"), 2)
    assert cmp["utility_free"] == pytest.approx(1.0 / 6.0, abs=1e-7)
    assert cmp["utility_limited"] == pytest.approx(0.5, abs=1e-7)
    assert cmp["condition_satisfied"] is True
    lhs, rhs, ok = mq.limit_entry_condition(mq.make_distribution("epsk(eps=0.1,k=2)"), 2)
    assert lhs == pytest.approx(3.25, abs=1e-9)
    assert rhs == pytest.approx(80.0 / 13.0, abs=1e-9)
    assert ok
    assert mq.mhr_sufficiency_check(mq.make_distribution("exp(1)"), 4) == "pass"
    assert mq.mhr_sufficiency_check(mq.make_distribution("epsk(0.02,1.3333333333)"), 2) == "not-applicable"


def test_simulation_is_deterministic():
    marginals = [mq.make_distribution("uniform(0,1)")] * 2
    a = mq.simulate_market(marginals, [0.5, 0.6], samples=200000, seed=5)
    b = mq.simulate_market(marginals, [0.5, 0.6], samples=200000, seed=5)
    assert a == b
    assert sum(a["shares"]) == 1.0
    assert abs(a["shares"][1] - 0.405) <= 4.0 * a["stderr"]["shares"][1]


def test_fixed_point():
    m = [mq.make_distribution("exp(1)"), mq.make_distribution("exp(0.5)")]
    r = mq.fixed_point_two_providers(m)
    assert r["converged"] is True
    assert r["prices"][0] == pytest.approx(1.6227550, abs=1e-4)
    assert r["prices"][1] == pytest.approx(2.0, abs=1e-4)
