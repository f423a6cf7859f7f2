import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from alexnorm.errors import (DegenerateWeight, HypothesisViolated,
                             NonIntegrableProduct)
from alexnorm.norms import gap_sweep
from alexnorm.registry import get_function, get_weight
from alexnorm.weights import (Weight, convergence_in_measure, product_integrand,
                              ratio_conditions_check, sufficient_conditions_check,
                              uniform_bound_lemma_check, variation_bound_check,
                              weight_ratio, weighted_gap_sweep, weighted_norm)

ONE = lambda y: np.ones_like(np.asarray(y, dtype=float))


@pytest.fixture(scope="module")
def rq():
    return get_weight("reciprocal_quadratic")


@pytest.fixture(scope="module")
def expw():
    return get_weight("exponential")


@pytest.fixture(scope="module")
def stepw():
    return get_weight("step_weight")


# -- ratio functions ----------------------------------------------------------


def test_ratio_exponential_constant(expw):
    g = weight_ratio(expw, 0.3)
    ys = np.linspace(-20.0, 20.0, 101)
    assert np.allclose(g(ys), math.exp(0.3), rtol=1e-14)


def test_ratio_zero_shift_is_one(rq, expw, stepw):
    for w in (rq, expw, stepw):
        g = weight_ratio(w, 0.0)
        assert np.all(g(np.linspace(-5.0, 5.0, 41)) == 1.0)


def test_ratio_reciprocal_quadratic_value(rq):
    g = weight_ratio(rq, 1.0)
    assert g(np.asarray([0.0]))[0] == pytest.approx(0.5, abs=1e-15)


@given(st.floats(min_value=-2, max_value=2), st.floats(min_value=-2, max_value=2),
       st.floats(min_value=-5, max_value=5))
@settings(max_examples=50, deadline=None)
def test_ratio_cocycle(x, xp, y):
    # g_{x+x'}(y) = g_x(y+x') * g_{x'}(y), an identity of the definition
    w = get_weight("reciprocal_quadratic")
    lhs = weight_ratio(w, x + xp)(np.asarray([y]))[0]
    rhs = weight_ratio(w, x)(np.asarray([y + xp]))[0] * \
        weight_ratio(w, xp)(np.asarray([y]))[0]
    assert lhs == pytest.approx(rhs, rel=1e-12)


# -- admissibility checks -------------------------------------------------------


def test_ratio_conditions_three_weights(rq, expw, stepw):
    xs = [0.5, 0.25, 0.1, 0.01]
    for w in (rq, expw, stepw):
        rep = ratio_conditions_check(w, xs, [(-10.0, 10.0)], 0.1)
        assert rep.passed, w.label


def test_ratio_conditions_variation_matches_closed_form(rq):
    # the ratio's exact variation on a window, from its reciprocal-pair extrema
    xs = [0.5, 0.1]
    rep = ratio_conditions_check(rq, xs, [(-50.0, 50.0)], 0.1, levels=16)
    for x, v in zip(rep.xs, rep.variation_per_x):
        q = abs(x) * math.sqrt(x * x + 4.0)
        g = weight_ratio(rq, x)
        R = (4.0 + x * x + q) / (4.0 + x * x - q)
        v_exact = (R - g(np.asarray([-50.0]))[0]) + (R - 1.0 / R) \
            + (g(np.asarray([50.0]))[0] - 1.0 / R)
        assert v == pytest.approx(v_exact, rel=1e-2)


def test_sufficient_conditions_reciprocal_quadratic(rq):
    rep = sufficient_conditions_check(rq, (-5.0, 5.0))
    assert rep.passed
    assert rep.m_I == pytest.approx(1.0 / 26.0, rel=1e-3)
    assert rep.M_I == pytest.approx(1.0, abs=1e-5)
    # w decreases away from 0 on each side: exact variation 2(w(0) - w(5))
    assert rep.bv_local == pytest.approx(2.0 * (1.0 - 1.0 / 26.0), rel=1e-6)


def test_sufficient_conditions_step(stepw):
    rep = sufficient_conditions_check(stepw, (-1.0, 1.0))
    assert rep.passed
    assert rep.m_I == 1.0 and rep.M_I == 2.0
    assert rep.bv_local == 1.0  # the jump, caught exactly via the breakpoint


def test_sufficient_conditions_exponential_local(expw):
    rep = sufficient_conditions_check(expw, (-3.0, 3.0))
    assert rep.passed  # locally fine even though unbounded globally


def test_degenerate_weight_raises():
    w = Weight.closed_form(lambda y: np.asarray(y, dtype=float))  # vanishes
    with pytest.raises(DegenerateWeight):
        sufficient_conditions_check(w, (-1.0, 1.0))


def test_variation_bound_three_weights(rq, expw, stepw):
    cases = [(rq, 0.5, (-10.0, 10.0)), (expw, 0.3, (-3.0, 3.0)),
             (stepw, 0.1, (-1.0, 1.0))]
    for w, x, I in cases:
        rep = variation_bound_check(w, x, I)
        assert rep.passed, w.label


def test_variation_bound_lhs_value_reciprocal_quadratic(rq):
    # windowed closed form for the lhs: rise to R, fall to 1/R, rise to g(10)
    x, L = 0.5, 10.0
    rep = variation_bound_check(rq, x, (-L, L))
    q = abs(x) * math.sqrt(x * x + 4.0)
    R = (4.0 + x * x + q) / (4.0 + x * x - q)
    g = weight_ratio(rq, x)
    v_exact = (R - g(np.asarray([-L]))[0]) + (R - 1.0 / R) \
        + (g(np.asarray([L]))[0] - 1.0 / R)
    assert rep.lhs == pytest.approx(v_exact, rel=1e-3)
    assert rep.lhs <= v_exact + 1e-9


def test_variation_bound_step_exact(stepw):
    # g jumps by 1 at -0.1 and at 0: lhs = 2; rhs = 1/1 + 2*1/1 = 3
    rep = variation_bound_check(stepw, 0.1, (-1.0, 1.0))
    assert rep.lhs == pytest.approx(2.0, abs=1e-12)
    assert rep.rhs == pytest.approx(3.0, abs=1e-12)
    assert rep.passed


def test_variation_bound_constant_weight():
    rep = variation_bound_check(get_weight("constant"), 0.5, (-2.0, 2.0))
    assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.passed


# -- weighted norms ---------------------------------------------------------------


def test_weighted_norm_unweighted_case():
    assert weighted_norm(get_function("indicator_01"), get_weight("constant")) == 1.0


def test_weighted_norm_constant_function(rq):
    # f = 1: the product is the weight itself; its primitive is arctan-shaped
    assert weighted_norm(ONE, rq) == pytest.approx(math.pi, abs=1e-6)


def test_weighted_norm_step_product(stepw):
    assert weighted_norm(get_function("indicator_01"), stepw) == pytest.approx(
        2.0, abs=1e-10)


def test_product_integrand_not_integrable(rq):
    with pytest.raises(NonIntegrableProduct):
        product_integrand(lambda y: np.asarray(y, dtype=float), rq)


# -- weighted sweeps --------------------------------------------------------------


def test_weighted_sweep_decreasing(rq):
    f = get_function("indicator_01")
    reports = weighted_gap_sweep(f, rq, [0.5, 0.25, 0.1, 0.01])
    gaps = [r.gap for r in reports]
    assert all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    assert all(r.passed for r in reports)
    assert gaps[-1] < 0.05


def test_weighted_sweep_against_direct_product_norm(rq):
    # oracle: build the product primitive of (tau_x f - f) w directly and take
    # its oscillation on a dense grid
    f = get_function("indicator_01")
    x = 0.25
    w = rq

    def diff_prod(y):
        y = np.asarray(y, dtype=float)
        chi = lambda t: ((t >= 0) & (t <= 1)).astype(float)
        return (chi(y - x) - chi(y)) * w(y)

    from alexnorm.realfn import build_primitive_from_pointwise
    P = build_primitive_from_pointwise(diff_prod, (-1.0, 2.0), 1e-12,
                                       breakpoints=[0.0, x, 1.0, 1.0 + x])
    lo, hi = P.extrema()
    oracle = hi - lo
    got = weighted_gap_sweep(f, w, [x])[0].gap
    assert got == pytest.approx(oracle, abs=1e-8)


def test_weighted_sweep_unit_weight_matches_gap_sweep():
    f = get_function("step_signal")
    xs = [0.7, 0.3, 0.05]
    a = weighted_gap_sweep(f, get_weight("constant"), xs)
    b = gap_sweep(f, xs)
    for ra, rb in zip(a, b):
        assert abs(ra.gap - rb.gap) <= 1e-12


def test_weighted_sweep_constant_function(rq):
    # tau_x f = f for constant f, so the weighted gaps sit at tail-noise level
    reports = weighted_gap_sweep(ONE, rq, [0.5, 0.1])
    assert all(r.gap < 1e-3 for r in reports)


# -- convergence in measure ---------------------------------------------------------


def test_measure_step_fraction_exact(stepw):
    fam = {x: weight_ratio(stepw, x) for x in (0.5, 0.25, 0.125)}
    ests = convergence_in_measure(fam, ONE, (-1.0, 1.0), 0.1, grid=4096)
    for e in ests:
        assert e.fraction == abs(e.x) / 2.0  # aligned grid: exact
        assert 0.0 <= e.fraction <= 1.0


def test_measure_identical_family():
    fam = {x: ONE for x in (0.5, 0.1)}
    ests = convergence_in_measure(fam, ONE, (-2.0, 2.0), 0.05)
    assert all(e.fraction == 0.0 and e.l1_average == 0.0 for e in ests)


def test_measure_reciprocal_quadratic_converges(rq):
    fam = {x: weight_ratio(rq, x) for x in (0.5, 0.1, 0.01)}
    ests = convergence_in_measure(fam, ONE, (-10.0, 10.0), 0.05)
    fr = [e.fraction for e in ests]
    l1 = [e.l1_average for e in ests]
    assert fr[0] >= fr[1] >= fr[2]
    assert fr[-1] == 0.0
    assert l1[0] > l1[1] > l1[2]


# -- bounded-variation family bound ---------------------------------------------------


def test_lemma_sine_family():
    ns = (1, 2, 4, 8)
    seq = [(lambda y, n=n: 1.0 + np.sin(np.asarray(y, dtype=float)) / n) for n in ns]
    rep = uniform_bound_lemma_check(seq, (0.0, 4.0 * math.pi), ONE, 8.0)
    assert rep.bound == pytest.approx(10.0, abs=1e-9)
    assert rep.witnessed
    # exact variation of the scaled sinusoid: 8/n over two full periods
    for n, v in zip(ns, rep.variations):
        assert v == pytest.approx(8.0 / n, rel=1e-4)


def test_lemma_constants():
    cs = (1.3, 1.05, 1.01)
    seq = [(lambda y, c=c: np.full_like(np.asarray(y, dtype=float), c)) for c in cs]
    rep = uniform_bound_lemma_check(seq, (0.0, 1.0), ONE, 0.0)
    assert rep.bound == pytest.approx(2.0, abs=1e-12)  # M + 1 + sup|g| = 0+1+1
    assert rep.witnessed


def test_lemma_spike_family_violates():
    seq = [(lambda y, n=n: n * ((np.asarray(y, dtype=float) >= 0)
                                & (np.asarray(y, dtype=float) < 1.0 / n)).astype(float))
           for n in (1, 2, 8, 64)]
    with pytest.raises(HypothesisViolated):
        uniform_bound_lemma_check(seq, (0.0, 1.0),
                                  lambda y: np.zeros_like(np.asarray(y, dtype=float)),
                                  8.0)


# -- caches -----------------------------------------------------------------------


def test_step_weight_right_continuous(stepw):
    # table weights evaluate to their limit from the right at each jump
    assert stepw(np.asarray([0.0]))[0] == 2.0
    assert stepw(np.asarray([-1e-12]))[0] == 1.0


def test_weight_caches_are_stable(rq):
    a = rq.bounds_on((-5.0, 5.0))
    b = rq.bounds_on((-5.0, 5.0))
    assert a == b
    v1 = rq.variation_on((-5.0, 5.0), 10)
    v2 = rq.variation_on((-5.0, 5.0), 10)
    assert v1 == v2
