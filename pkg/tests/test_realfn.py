import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import sici

from alexnorm.errors import NonConvergentTail, ToleranceNotMet
from alexnorm.realfn import (Interval, Partition, PiecewiseLinearPrimitive,
                             build_primitive_from_pointwise, eval_primitive,
                             integral, oscillation, variation)
from alexnorm.registry import get_function, indicator

INF = float("inf")


def chi01(y):
    y = np.asarray(y, dtype=float)
    return ((y >= 0) & (y <= 1)).astype(float)


# -- extended reals and basic types ----------------------------------------


def test_extended_real_total_order():
    assert -INF < -1e300 < 0.0 < 1e300 < INF
    assert not (INF < INF) and not (-INF < -INF)


def test_interval_validation():
    Interval(-INF, INF)
    Interval(0.0, 0.0)
    with pytest.raises(ValueError):
        Interval(1.0, 0.0)
    with pytest.raises(ValueError):
        Interval(float("nan"), 1.0)


def test_partition_validation():
    Partition((0.0, 0.5, 1.0))
    with pytest.raises(ValueError):
        Partition((0.0,))
    with pytest.raises(ValueError):
        Partition((0.0, 0.0, 1.0))
    p = Partition.dyadic(Interval(0.0, 1.0), 3, extra=(0.3, 2.0))
    assert len(p.points) == 10  # 9 dyadic + one interior extra
    assert 0.3 in p.points and 2.0 not in p.points


# -- primitives -------------------------------------------------------------


def test_eval_primitive_indicator():
    F = get_function("indicator_01").primitive
    assert eval_primitive(F, 0.5) == 0.5
    assert eval_primitive(F, INF) == 1.0
    assert eval_primitive(F, -INF) == F.limit_neg == 0.0


def test_table_breakpoint_values_exact():
    F = PiecewiseLinearPrimitive([0.0, 0.3, 1.7], [0.0, -2.0, 5.0])
    for x, v in zip(F.xs, F.ys):
        assert F.eval(x) == v
    assert F.eval(-100.0) == 0.0 and F.eval(100.0) == 5.0


def test_table_shift_is_exact():
    F = PiecewiseLinearPrimitive([0.0, 1.0], [0.0, 1.0])
    G = F.shifted(0.25)
    assert np.array_equal(G.ys, F.ys)
    assert G.eval(1.25) == 1.0


def test_integrand_equality_by_primitive():
    f = indicator(0.0, 1.0)
    g = indicator(0.0, 1.0)
    assert f == g
    assert f != indicator(0.0, 2.0)


def test_pointwise_matches_primitive_derivative():
    # central differences of F against the declared pointwise evaluator,
    # away from breakpoints
    h = 1e-6
    for name in ("gaussian", "bump", "sinc_primitive"):
        f = get_function(name)
        pt = f.pointwise_or_derived()
        ys = np.asarray([-0.71, -0.2, 0.13, 0.57])
        fd = (f.primitive.eval(ys + h) - f.primitive.eval(ys - h)) / (2.0 * h)
        assert np.allclose(fd, pt(ys), atol=1e-5)


# -- integral ---------------------------------------------------------------


def test_integral_unit_box():
    f = get_function("indicator_01")
    assert integral(f, (0.0, 1.0)) == 1.0
    assert integral(f, (-INF, INF)) == 1.0


def test_integral_sinc_whole_line():
    # F(y) = sin(y)/y -> 0 at both ends; tails below 2e-6 at |y| = 1e6
    f = get_function("sinc_primitive")
    for y in (1e6, -1e6):
        assert abs(math.sin(y) / y) < 2e-6
    assert integral(f, (-INF, INF)) == 0.0


def test_integral_additive():
    f = get_function("step_signal")
    a, b, c = -0.5, 0.8, 2.4
    assert integral(f, (a, c)) == pytest.approx(
        integral(f, (a, b)) + integral(f, (b, c)), abs=1e-15)


# -- builder ----------------------------------------------------------------


def test_build_indicator_exactness():
    P = build_primitive_from_pointwise(chi01, (-1.0, 2.0), 1e-10)
    assert abs(P.eval(2.0) - 1.0) < 1e-10
    assert abs(P.limit_pos - 1.0) < 1e-10
    # spot evaluations against the exact ramp
    for x in (-0.5, 0.2, 0.9, 1.5):
        assert abs(P.eval(x) - min(max(x, 0.0), 1.0)) < 1e-9


def test_build_gaussian_total_mass():
    # oracle: dense composite midpoint refinement, independent of the builder
    xs = np.linspace(-8.0, 8.0, 1_000_001)
    mids = 0.5 * (xs[1:] + xs[:-1])
    oracle = float(np.sum(np.exp(-mids * mids)) * (xs[1] - xs[0]))
    assert abs(oracle - math.sqrt(math.pi)) < 1e-9
    P = build_primitive_from_pointwise(lambda y: np.exp(-np.asarray(y) ** 2),
                                       (-8.0, 8.0), 1e-10)
    assert abs(P.limit_pos - oracle) < 1e-9
    assert abs(P.limit_pos - math.sqrt(math.pi)) < 1e-10


def test_build_oscillatory_tail_needs_acceleration():
    f = lambda y: np.cos(np.asarray(y, dtype=float)) / np.asarray(y, dtype=float)
    with pytest.raises(NonConvergentTail):
        build_primitive_from_pointwise(f, (1.0, INF), 1e-8)
    P = build_primitive_from_pointwise(f, (1.0, INF), 1e-8, tail_mode="accelerate")
    # oracle: the cosine-integral closed form
    expected = -float(sici(1.0)[1])
    assert abs((P.limit_pos - P.eval(1.0)) - expected) < 1e-8
    assert P.tail_estimated


def test_build_declared_tail_values():
    f = lambda y: np.exp(-np.abs(np.asarray(y, dtype=float)))
    P = build_primitive_from_pointwise(f, (-INF, INF), 1e-10, tail_values=(0.0, 0.0),
                                       core_halfwidth=40.0)
    assert abs(P.limit_pos - 2.0) < 1e-9
    assert not P.tail_estimated


def test_build_panel_budget_exhaustion():
    noisy = lambda y: np.sign(np.sin(57.31 * np.asarray(y, dtype=float)))
    with pytest.raises(ToleranceNotMet):
        build_primitive_from_pointwise(noisy, (0.0, 10.0), 1e-12, max_panels=64)


def test_builder_reproduces_subinterval_quadrature():
    # invariant: integral over any subinterval within 10*tol of an oracle
    tol = 1e-10
    P = build_primitive_from_pointwise(lambda y: np.exp(-np.asarray(y) ** 2),
                                       (-6.0, 6.0), tol)
    f = lambda t: math.exp(-t * t)
    rng = np.random.default_rng(7)
    for _ in range(10):
        a, b = np.sort(rng.uniform(-6.0, 6.0, 2))
        xs = np.linspace(a, b, 200_001)
        mids = 0.5 * (xs[1:] + xs[:-1])
        oracle = float(np.sum(np.exp(-mids * mids)) * (xs[1] - xs[0]))
        assert abs((P.eval(b) - P.eval(a)) - oracle) < max(10 * tol, 1e-8)


# -- variation and oscillation ----------------------------------------------


def test_variation_monotone_identity():
    for levels in (1, 4, 8):
        assert variation(lambda y: np.asarray(y, dtype=float),
                         (0.0, 1.0), levels) == pytest.approx(1.0, abs=1e-15)


def test_variation_ratio_closed_form():
    # the ratio of the reciprocal-quadratic weight has extrema R and 1/R with
    # R = (4 + x^2 + q)/(4 + x^2 - q), q = |x| sqrt(x^2 + 4); full-line
    # variation 2q.  Oracle: brute-force fine grid, cross-checked against R.
    w = lambda y: 1.0 / (np.asarray(y, dtype=float) ** 2 + 1.0)
    x = 0.5
    g = lambda y: w(np.asarray(y, dtype=float) + x) / w(y)
    ys = np.linspace(-200.0, 200.0, 2_000_001)
    gv = g(ys)
    brute = float(np.abs(np.diff(gv)).sum())
    q = abs(x) * math.sqrt(x * x + 4.0)
    R = (4.0 + x * x + q) / (4.0 + x * x - q)
    assert gv.max() == pytest.approx(R, abs=1e-8)
    assert gv.min() == pytest.approx(1.0 / R, abs=1e-8)
    # exact variation on [-L, L]: rise to R, fall to 1/R, rise back to g(L)
    L = 200.0
    v_exact = (R - float(g(np.asarray([-L]))[0])) + (R - 1.0 / R) \
        + (float(g(np.asarray([L]))[0]) - 1.0 / R)
    assert brute == pytest.approx(v_exact, abs=1e-6)
    assert v_exact == pytest.approx(2.0 * q, abs=4.0 * x / L + 1e-6)
    est = variation(g, (-200.0, 200.0), 16)
    assert est <= v_exact + 1e-9
    assert est == pytest.approx(v_exact, rel=2e-3)


def test_variation_exponential_ratio_constant():
    g = lambda y: np.exp(np.asarray(y, dtype=float) + 0.7) / np.exp(np.asarray(y, dtype=float))
    assert variation(g, (-30.0, 30.0), 10) < 1e-9


def test_variation_table_exact_any_level():
    F = PiecewiseLinearPrimitive([0.0, 1.0, 2.0], [0.0, 1.0, 0.0])
    for levels in (1, 2, 6):
        assert variation(F, (-1.0, 3.0), levels) == 2.0


@given(st.integers(min_value=1, max_value=8))
@settings(max_examples=15, deadline=None)
def test_variation_monotone_in_levels(levels):
    h = lambda y: np.sin(3.0 * np.asarray(y, dtype=float)) + 0.3 * np.asarray(y, dtype=float)
    lo = variation(h, (0.0, 5.0), levels)
    hi = variation(h, (0.0, 5.0), levels + 1)
    assert hi >= lo - 1e-12


def test_oscillation_examples():
    assert oscillation(chi01, (-1.0, 2.0), 10) == 1.0
    assert oscillation(lambda y: np.sin(np.asarray(y, dtype=float)),
                       (0.0, 2.0 * math.pi), 12) == pytest.approx(2.0, abs=1e-6)
    F = get_function("indicator_01").primitive
    assert oscillation(F, (-INF, INF), 8) == 1.0


@given(st.integers(min_value=2, max_value=10))
@settings(max_examples=15, deadline=None)
def test_oscillation_le_variation(levels):
    h = lambda y: np.cos(2.0 * np.asarray(y, dtype=float)) * np.exp(
        -0.1 * np.asarray(y, dtype=float) ** 2)
    I = (-4.0, 4.0)
    assert oscillation(h, I, levels) <= variation(h, I, levels) + 1e-12


def test_zero_length_interval():
    assert variation(chi01, (0.5, 0.5), 4) == 0.0
    assert oscillation(chi01, (0.5, 0.5), 4) == 0.0


@given(st.lists(st.floats(min_value=-10, max_value=10), min_size=3, max_size=8,
                unique=True),
       st.floats(min_value=-5, max_value=5), st.floats(min_value=-5, max_value=5))
@settings(max_examples=40, deadline=None)
def test_integral_additivity_random_tables(pts, b, c):
    # F(c) - F(a) == (F(b) - F(a)) + (F(c) - F(b)) for any table and any b
    xs = np.sort(np.asarray(pts))
    F = PiecewiseLinearPrimitive(xs, np.cos(xs))
    a = -20.0
    assert (F.eval(b) - F.eval(a)) + (F.eval(c) - F.eval(b)) == pytest.approx(
        F.eval(c) - F.eval(a), abs=1e-12)
