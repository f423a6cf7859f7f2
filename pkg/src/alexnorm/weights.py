"""Weighted norms and weight admissibility.

A positive weight w acts through its ratio functions g_x(y) = w(y+x)/w(y).
Translation continuity in the weighted norm holds exactly when the g_x are
essentially bounded and of essentially bounded variation uniformly for small
x, with g_x -> 1 in measure on compacts; the checks here estimate those three
properties on grids (midpoint cells, refinement-stability deltas) and verify
the variation transfer bound

    V_I g_x <= V_{I+x} w / m_I + M * V_I w / m_I^2.

Verdicts are evidence grade: stable under one refinement doubling, never
claimed as proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

from .errors import (DegenerateWeight, HypothesisViolated, NonConvergentTail,
                     NonIntegrableProduct, ToleranceNotMet)
from .norms import GapReport, _difference_extrema, alexiewicz_norm, gap_sweep
from .realfn import (Integrand, Interval, _as_interval, _call_vec,
                     build_primitive_from_pointwise, variation)

Evaluator = Callable[[np.ndarray], np.ndarray]


class Weight:
    """A positive weight function with per-interval bound/variation caches.

    Table weights are piecewise constant and normalized to right continuity on
    ingestion.  Caches are write-once: computed on first request, then reused.
    """

    def __init__(self, func: Evaluator, *, derivative: Optional[Evaluator] = None,
                 table: Optional[tuple] = None, constant: Optional[float] = None,
                 label: str = ""):
        self._func = func
        self._derivative = derivative
        self._table = table
        self.constant_value = constant
        self.label = label
        self._bounds_cache: Dict = {}
        self._var_cache: Dict = {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def closed_form(cls, func: Evaluator, derivative: Optional[Evaluator] = None,
                    label: str = "") -> "Weight":
        return cls(func, derivative=derivative, label=label)

    @classmethod
    def piecewise_constant(cls, breakpoints, values, label: str = "") -> "Weight":
        bps = np.asarray(breakpoints, dtype=float)
        vals = np.asarray(values, dtype=float)
        if bps.ndim != 1 or len(vals) != len(bps) + 1:
            raise ValueError("need len(values) == len(breakpoints) + 1")
        if len(bps) and not np.all(np.diff(bps) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(vals <= 0):
            raise ValueError("weight values must be positive")

        def step(y):
            idx = np.searchsorted(bps, np.asarray(y, dtype=float), side="right")
            return vals[idx]

        return cls(step, table=(bps, vals), label=label)

    @classmethod
    def constant(cls, c: float = 1.0, label: str = "constant") -> "Weight":
        if c <= 0:
            raise ValueError("a weight must be positive")
        return cls(lambda y: np.full_like(np.asarray(y, dtype=float), c),
                   derivative=lambda y: np.zeros_like(np.asarray(y, dtype=float)),
                   constant=c, label=label)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, y):
        return _call_vec(self._func, np.asarray(y, dtype=float))

    @property
    def is_constant_one(self) -> bool:
        return self.constant_value == 1.0

    def derivative(self, y):
        if self._derivative is not None:
            return _call_vec(self._derivative, np.asarray(y, dtype=float))
        h = 1e-6
        y = np.asarray(y, dtype=float)
        return (self(y + h) - self(y - h)) / (2.0 * h)

    def breakpoints(self) -> Optional[np.ndarray]:
        return None if self._table is None else self._table[0]

    def ratio_seeds(self, x: float, I: Interval) -> tuple:
        """Jump locations of g_x inside I, for table weights."""
        bp = self.breakpoints()
        if bp is None or not len(bp):
            return ()
        pts = np.union1d(bp, bp - x)
        return tuple(pts[(pts >= I.a) & (pts <= I.b)])

    # -- cached estimates ---------------------------------------------------

    def bounds_on(self, I, grid: int = 4096) -> tuple:
        """(m, M, stability_delta) from midpoint cells at grid and 2*grid."""
        I = _as_interval(I)
        key = (I.a, I.b, grid)
        if key not in self._bounds_cache:
            vals1 = self(_midpoints(I, grid))
            vals2 = self(_midpoints(I, 2 * grid))
            m = float(min(vals1.min(), vals2.min()))
            M = float(max(vals1.max(), vals2.max()))
            delta = max(abs(float(vals1.min()) - float(vals2.min())),
                        abs(float(vals1.max()) - float(vals2.max())))
            self._bounds_cache[key] = (m, M, delta)
        return self._bounds_cache[key]

    def variation_on(self, I, levels: int = 12) -> float:
        I = _as_interval(I)
        key = (I.a, I.b, levels)
        if key not in self._var_cache:
            seeds = () if self._table is None else tuple(self._table[0])
            self._var_cache[key] = variation(lambda y: self(y), I, levels,
                                             extra_points=seeds)
        return self._var_cache[key]


def _midpoints(I: Interval, n: int) -> np.ndarray:
    return I.a + (np.arange(n) + 0.5) * (I.length / n)


@dataclass(frozen=True)
class RatioFunction:
    """g_x(y) = w(y+x)/w(y) for a fixed shift x."""

    x: float
    weight: Weight

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return self.weight(y + self.x) / self.weight(y)

    def sup_on(self, I, grid: int = 4096) -> float:
        I = _as_interval(I)
        return float(self(_midpoints(I, grid)).max())

    def variation_on(self, I, levels: int = 12) -> float:
        I = _as_interval(I)
        return variation(self, I, levels,
                         extra_points=self.weight.ratio_seeds(self.x, I))


def weight_ratio(w: Weight, x: float) -> RatioFunction:
    return RatioFunction(x=x, weight=w)


@dataclass(frozen=True)
class MeasureEstimate:
    """Grid fraction of an interval where a function strays from its target."""

    interval: Interval
    epsilon: float
    fraction: float
    grid_size: int
    l1_average: float
    stability_delta: float
    x: float = 0.0


def convergence_in_measure(h_family: Mapping[float, Evaluator], target: Evaluator,
                           I, eps: float, grid: int = 4096) -> List[MeasureEstimate]:
    """Per shift: fraction of midpoint cells where |h_x - target| > eps, plus
    the companion L1 grid estimate of the integral of |h_x - target| over I."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    I = _as_interval(I)
    out = []
    for x in sorted(h_family, key=lambda t: (-abs(t), t)):
        h = h_family[x]
        est = []
        for n in (grid, 2 * grid):
            mids = _midpoints(I, n)
            diff = np.abs(_call_vec(h, mids) - _call_vec(target, mids))
            est.append((float(np.mean(diff > eps)), float(np.mean(diff) * I.length)))
        out.append(MeasureEstimate(interval=I, epsilon=eps, fraction=est[0][0],
                                   grid_size=grid, l1_average=est[0][1],
                                   stability_delta=abs(est[0][0] - est[1][0]), x=x))
    return out


# ---------------------------------------------------------------------------
# Admissibility checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatioConditionsReport:
    xs: tuple
    bound_per_x: tuple
    variation_per_x: tuple
    uniform_bound: float
    uniform_variation: float
    bound_stable: bool
    variation_stable: bool
    measure_estimates: tuple
    measure_converges: bool
    passed: bool


def ratio_conditions_check(w: Weight, xs: Sequence[float], I_list: Sequence,
                           eps: float, grid: int = 4096, levels: int = 12,
                           pass_fraction: float = 0.05) -> RatioConditionsReport:
    """Evidence-grade verdicts on the three ratio conditions: uniform bound,
    uniform variation, and convergence to 1 in measure on each interval."""
    if not len(xs):
        raise ValueError("xs must be nonempty")
    intervals = [_as_interval(I) for I in I_list]
    xs_sorted = sorted(xs, key=lambda t: (-abs(t), t))

    bounds = []
    bound_deltas = []
    variations = []
    var_deltas = []
    for x in xs_sorted:
        g = weight_ratio(w, x)
        b = max(g.sup_on(I, grid) for I in intervals)
        b2 = max(g.sup_on(I, 2 * grid) for I in intervals)
        bounds.append(max(b, b2))
        bound_deltas.append(abs(b - b2))
        v = max(g.variation_on(I, levels) for I in intervals)
        v2 = max(g.variation_on(I, levels + 1) for I in intervals)
        variations.append(v2)
        var_deltas.append(abs(v2 - v))

    uniform_bound = max(bounds)
    uniform_variation = max(variations)
    bound_stable = all(d <= 1e-3 * (1.0 + b) for d, b in zip(bound_deltas, bounds))
    variation_stable = all(d <= max(1e-6, 5e-3 * (1.0 + v))
                           for d, v in zip(var_deltas, variations))

    family = {x: weight_ratio(w, x) for x in xs_sorted}
    one = lambda y: np.ones_like(np.asarray(y, dtype=float))
    measures = []
    measure_ok = True
    for I in intervals:
        ests = convergence_in_measure(family, one, I, eps, grid)
        fr = [e.fraction for e in ests]
        slack = 1.5 / grid + 1e-12
        nonincreasing = all(fr[i + 1] <= fr[i] + slack for i in range(len(fr) - 1))
        measure_ok = measure_ok and nonincreasing and fr[-1] <= pass_fraction
        measures.extend(ests)

    passed = (math.isfinite(uniform_bound) and bound_stable and
              variation_stable and measure_ok)
    return RatioConditionsReport(
        xs=tuple(xs_sorted), bound_per_x=tuple(bounds),
        variation_per_x=tuple(variations), uniform_bound=uniform_bound,
        uniform_variation=uniform_variation, bound_stable=bound_stable,
        variation_stable=variation_stable, measure_estimates=tuple(measures),
        measure_converges=measure_ok, passed=passed)


@dataclass(frozen=True)
class SufficientConditionsReport:
    m_I: float
    M_I: float
    bv_local: float
    bv_stable: bool
    measure_continuity: tuple
    passed: bool


def sufficient_conditions_check(w: Weight, I, grid: int = 4096, levels: int = 12,
                                eps: float = 0.05,
                                x_ladder: Optional[Sequence[float]] = None
                                ) -> SufficientConditionsReport:
    """Positive bounds, local bounded variation, and continuity in measure of
    the weight itself on a compact interval."""
    I = _as_interval(I)
    if grid < 2:
        raise ValueError("grid must be >= 2")
    m, M, _ = w.bounds_on(I, grid)
    if m <= 0:
        raise DegenerateWeight(f"grid infimum {m} is not positive on [{I.a}, {I.b}]")
    bv = w.variation_on(I, levels)
    bv2 = w.variation_on(I, levels + 1)
    bv_stable = abs(bv2 - bv) <= max(1e-6, 5e-3 * (1.0 + bv2))

    if x_ladder is None:
        x_ladder = [2.0 ** -k for k in range(1, 10)]
    family = {x: (lambda y, x=x: w(np.asarray(y, dtype=float) + x)) for x in x_ladder}
    ests = convergence_in_measure(family, lambda y: w(y), I, eps, grid)
    fr = [e.fraction for e in ests]
    slack = 1.5 / grid + 1e-12
    measure_ok = (all(fr[i + 1] <= fr[i] + slack for i in range(len(fr) - 1))
                  and fr[-1] <= 0.05)

    passed = bool(m > 0 and math.isfinite(M) and bv_stable and measure_ok)
    return SufficientConditionsReport(m_I=m, M_I=M, bv_local=bv2,
                                      bv_stable=bv_stable,
                                      measure_continuity=tuple(ests), passed=passed)


@dataclass(frozen=True)
class VariationBoundReport:
    x: float
    lhs: float
    rhs: float
    m_I: float
    M_used: float
    passed: bool


def variation_bound_check(w: Weight, x: float, I, levels: int = 12,
                          grid: int = 4096, tol: float = 1e-9) -> VariationBoundReport:
    """Check V_I g_x <= V_{I+x} w / m_I + M V_I w / m_I^2.

    m_I is the grid infimum of w over I (the denominators live there); M is a
    grid upper bound of w over I and I+x, covering the shifted evaluations.
    """
    I = _as_interval(I)
    g = weight_ratio(w, x)
    lhs = g.variation_on(I, levels)
    m, M0, _ = w.bounds_on(I, grid)
    if m <= 0:
        raise DegenerateWeight(f"grid infimum {m} is not positive on [{I.a}, {I.b}]")
    _, M1, _ = w.bounds_on(I.shifted(x), grid)
    M = max(M0, M1)
    rhs = w.variation_on(I.shifted(x), levels) / m + M * w.variation_on(I, levels) / (m * m)
    return VariationBoundReport(x=x, lhs=lhs, rhs=rhs, m_I=m, M_used=M,
                                passed=lhs <= rhs + tol)


# ---------------------------------------------------------------------------
# Weighted norms and sweeps
# ---------------------------------------------------------------------------


def _resolve_pointwise(f) -> Optional[Evaluator]:
    if isinstance(f, Integrand):
        return f.pointwise_or_derived()
    if callable(f):
        return f
    return None


def product_integrand(f, w: Weight, *, tol: float = 1e-10,
                      core_halfwidth: float = 64.0, label: str = "") -> Integrand:
    """The integrable object fw, built from pointwise data.

    f may be an Integrand or a bare evaluator (the weighted theory covers
    functions that are not integrable on their own, e.g. constants).
    """
    if isinstance(f, Integrand) and w.constant_value is not None:
        c = w.constant_value
        if c == 1.0:
            return f
        pt = f.pointwise_or_derived()
        scaled_pt = None if pt is None else (lambda y: c * _call_vec(pt, y))
        return Integrand(f.primitive.scaled(c), scaled_pt,
                         label or f"{f.label}*{w.label}")

    fp = _resolve_pointwise(f)
    if fp is None:
        raise NonIntegrableProduct("no pointwise data for the product")

    hints = []
    wb = w.breakpoints()
    if wb is not None:
        hints.extend(wb)
    support = Interval(-math.inf, math.inf)
    core = core_halfwidth
    if isinstance(f, Integrand):
        lo, hi = f.primitive.support_window()
        bp = f.primitive.breakpoints()
        if bp is not None:
            hints.extend(bp)
            support = Interval(lo, hi)  # f vanishes outside its table
        else:
            core = max(core_halfwidth, abs(lo), abs(hi))

    prod = lambda y: _call_vec(fp, np.asarray(y, dtype=float)) * w(y)
    try:
        P = build_primitive_from_pointwise(prod, support, tol, breakpoints=hints,
                                           core_halfwidth=core,
                                           label=label or "product")
    except (NonConvergentTail, ToleranceNotMet) as exc:
        raise NonIntegrableProduct(str(exc)) from exc
    return Integrand(P, prod, label or "product")


def weighted_norm(f, w: Weight, *, tol: float = 1e-10,
                  core_halfwidth: float = 64.0) -> float:
    """Alexiewicz norm of the product fw."""
    return alexiewicz_norm(product_integrand(f, w, tol=tol,
                                             core_halfwidth=core_halfwidth))


def weighted_gap_sweep(f, w: Weight, xs: Sequence[float], tol: float = 1e-9,
                       build_tol: float = 1e-10,
                       core_halfwidth: float = 64.0) -> List[GapReport]:
    """||(tau_x f - f) w|| along a shift ladder.

    Computed through the decomposition into the uniform-continuity term of the
    product primitive G and the ratio correction: the norm is the oscillation
    of D(t) = G(t-x) - G(t) + C_x(t-x), where C_x is the primitive of
    f(y) w(y) (g_x(y) - 1) = f(y) (w(y+x) - w(y)).
    """
    if not len(xs):
        raise ValueError("xs must be nonempty")
    if w.is_constant_one and isinstance(f, Integrand):
        return gap_sweep(f, xs, tol)

    fw = product_integrand(f, w, tol=build_tol, core_halfwidth=core_halfwidth)
    G = fw.primitive
    fp = _resolve_pointwise(f)
    reports = []
    for x in sorted(xs, key=lambda t: (-abs(t), t)):
        gap, bound = _weighted_gap_single(f, fp, w, G, x, build_tol, core_halfwidth)
        reports.append(GapReport(x=x, gap=gap, bound_upper=bound,
                                 passed=gap <= bound + tol))
    return reports


def _weighted_gap_single(f, fp, w: Weight, G, x: float, build_tol: float,
                         core_halfwidth: float) -> tuple:
    if x == 0.0:
        return 0.0, 0.0
    corr = lambda y: _call_vec(fp, np.asarray(y, dtype=float)) * (
        w(np.asarray(y, dtype=float) + x) - w(np.asarray(y, dtype=float)))
    hints = []
    wb = w.breakpoints()
    if wb is not None:
        hints.extend(wb)
        hints.extend(wb - x)
    support = Interval(-math.inf, math.inf)
    core = core_halfwidth
    if isinstance(f, Integrand):
        bp = f.primitive.breakpoints()
        lo, hi = f.primitive.support_window()
        if bp is not None:
            hints.extend(bp)
            support = Interval(lo, hi)
        else:
            core = max(core_halfwidth, abs(lo), abs(hi))
    try:
        C = build_primitive_from_pointwise(corr, support, build_tol,
                                           breakpoints=hints, core_halfwidth=core)
    except (NonConvergentTail, ToleranceNotMet) as exc:
        raise NonIntegrableProduct(str(exc)) from exc

    def D(t):
        t = np.asarray(t, dtype=float)
        return G.eval(t - x) - G.eval(t) + C.eval(t - x)

    glo, ghi = G.support_window()
    clo, chi = C.support_window()
    lo = min(glo, clo) - abs(x) - 1.0
    hi = max(ghi, chi) + abs(x) + 1.0
    seeds: list = []
    for P in (G, C):
        bp = P.breakpoints()
        if bp is not None:
            seeds.extend(bp)
            seeds.extend(bp + x)
    from .realfn import grid_extrema  # local import to keep module top lean

    mn, mx = grid_extrema(D, (lo, hi), levels=15, seeds=seeds,
                          include=(0.0, C.limit_pos))
    gap = mx - mn
    dmn, dmx = _difference_extrema(G, x)
    c_lo, c_hi = C.extrema()
    bound = 2.0 * max(abs(dmn), abs(dmx)) + (c_hi - c_lo)
    return gap, bound


# ---------------------------------------------------------------------------
# Uniform boundedness of BV families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LemmaBoundReport:
    bound: float
    witnessed: bool
    variations: tuple
    sup_values: tuple
    close_fractions: tuple


def uniform_bound_lemma_check(g_seq: Sequence[Evaluator], E, g_limit: Evaluator,
                              M: float, grid: int = 4096, levels: int = 12,
                              tol: float = 1e-9) -> LemmaBoundReport:
    """Witness the uniform bound M + 1 + sup|g| for a variation-bounded family
    converging in measure to a BV limit.

    Raises HypothesisViolated when a family member exceeds the variation
    budget M on the sampled window (the hypotheses fail, not the library).
    """
    E = _as_interval(E)
    variations = []
    for i, gn in enumerate(g_seq):
        Vn = variation(gn, E, levels)
        if Vn > M + tol:
            raise HypothesisViolated(
                f"family member {i} has variation {Vn:.6g} > budget {M:.6g}")
        variations.append(Vn)

    mids = _midpoints(E, grid)
    g_sup = float(np.abs(_call_vec(g_limit, mids)).max())
    g_sup = max(g_sup, float(np.abs(_call_vec(g_limit, _midpoints(E, 2 * grid))).max()))
    bound = M + 1.0 + g_sup

    sups = []
    fracs = []
    witnessed = True
    gv = _call_vec(g_limit, mids)
    for gn in g_seq:
        vals = _call_vec(gn, mids)
        sn = float(np.abs(vals).max())
        sups.append(sn)
        fracs.append(float(np.mean(np.abs(vals - gv) > 1.0)))
        witnessed = witnessed and sn <= bound + tol
    return LemmaBoundReport(bound=bound, witnessed=witnessed,
                            variations=tuple(variations), sup_values=tuple(sups),
                            close_fractions=tuple(fracs))
