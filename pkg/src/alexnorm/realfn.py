"""Real functions represented by their continuous primitives.

An integrable object is stored through its primitive F (so that F' = f in the
distributional sense), a continuous function on the extended real line with
finite limits at both infinities.  Everything downstream (norms, translation
gaps, weighted products, Poisson integrals) reduces to evaluating, integrating
and taking oscillations/variations of such primitives, so this module carries
the three concrete representations and the low-level engines:

* ``PiecewiseLinearPrimitive``  -- exact node tables; oscillation and
  variation are exact.
* ``PiecewiseChebyshevPrimitive`` -- adaptive panel representation produced by
  ``build_primitive_from_pointwise``; panel extrema are found from the
  derivative's Chebyshev roots, so oscillation is exact to machine precision.
* ``ClosedFormPrimitive`` -- user- or registry-supplied closed forms; extrema
  are grid estimates refined by bounded scalar minimization.

The extended real line is modelled by ordinary floats together with
``float('inf')`` / ``float('-inf')``, which already carry the required total
order.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from scipy.optimize import minimize_scalar

from .errors import NonConvergentTail, ToleranceNotMet

Evaluator = Callable[[np.ndarray], np.ndarray]

NEG_INF = float("-inf")
POS_INF = float("inf")

_EPS = float(np.finfo(float).eps)


def is_finite_real(x: float) -> bool:
    """True for a finite real; False for the two infinities. NaN is rejected."""
    if isinstance(x, float) and math.isnan(x):
        raise ValueError("NaN is not an extended real")
    return math.isfinite(x)


@dataclass(frozen=True)
class Interval:
    """A closed interval [a, b] of the extended real line, a <= b."""

    a: float
    b: float

    def __post_init__(self):
        if math.isnan(self.a) or math.isnan(self.b):
            raise ValueError("interval endpoints must not be NaN")
        if not self.a <= self.b:
            raise ValueError(f"interval endpoints out of order: [{self.a}, {self.b}]")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.a) and math.isfinite(self.b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def clipped(self, lo: float, hi: float) -> "Interval":
        return Interval(max(self.a, lo), min(self.b, hi))

    def shifted(self, dx: float) -> "Interval":
        return Interval(self.a + dx, self.b + dx)


def _as_interval(I) -> Interval:
    if isinstance(I, Interval):
        return I
    a, b = I
    return Interval(float(a), float(b))


@dataclass(frozen=True)
class Partition:
    """A finite strictly increasing point set inside an interval."""

    points: tuple

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("a partition needs at least two points")
        diffs = np.diff(np.asarray(self.points, dtype=float))
        if not np.all(diffs > 0):
            raise ValueError("partition points must be strictly increasing")

    @classmethod
    def dyadic(cls, I: Interval, levels: int, extra: Sequence[float] = ()) -> "Partition":
        """2**levels + 1 equispaced points on I, merged with any extra points in I."""
        if not I.finite:
            raise ValueError("dyadic partitions need a finite interval")
        if levels < 1:
            raise ValueError("levels must be >= 1")
        pts = np.linspace(I.a, I.b, 2 ** levels + 1)
        if len(extra):
            inside = np.asarray(extra, dtype=float)
            inside = inside[(inside >= I.a) & (inside <= I.b)]
            pts = np.union1d(pts, inside)
        return cls(tuple(pts))


def _call_vec(func: Evaluator, xs: np.ndarray) -> np.ndarray:
    """Evaluate func on an array, falling back to a scalar loop if needed."""
    xs = np.asarray(xs, dtype=float)
    try:
        out = np.asarray(func(xs), dtype=float)
        if out.shape != xs.shape:
            raise ValueError
        return out
    except (TypeError, ValueError, IndexError):
        flat = [float(func(float(t))) for t in np.ravel(xs)]
        return np.asarray(flat, dtype=float).reshape(xs.shape)


@lru_cache(maxsize=64)
def gauss_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_integral(func: Evaluator, a: float, b: float, n: int = 32) -> float:
    """Fixed Gauss-Legendre quadrature of func over [a, b]."""
    if a == b:
        return 0.0
    x, w = gauss_nodes(n)
    mid = 0.5 * (a + b)
    hw = 0.5 * (b - a)
    return float(hw * np.dot(w, _call_vec(func, mid + hw * x)))


# ---------------------------------------------------------------------------
# Primitive representations
# ---------------------------------------------------------------------------


class Primitive:
    """Continuous F on the extended real line with finite limits at +-inf."""

    limit_neg: float
    limit_pos: float
    label: str

    def eval(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.eval(x)

    def breakpoints(self) -> Optional[np.ndarray]:
        """Node set for table representations, None for closed forms."""
        return None

    def support_window(self) -> tuple:
        """Finite window outside which F is (at least numerically) constant."""
        raise NotImplementedError

    def shifted(self, dx: float) -> "Primitive":
        raise NotImplementedError

    def scaled(self, c: float) -> "Primitive":
        raise NotImplementedError

    def extrema(self) -> tuple:
        """(min, max) of F over the extended real line, limits included."""
        raise NotImplementedError

    def window_integral(self, u: float, v: float) -> float:
        """Integral of F itself over the finite interval [u, v]."""
        raise NotImplementedError

    def pointwise_derived(self) -> Optional[Evaluator]:
        """Derivative evaluator recovered from the representation, if exact."""
        return None

    def total_variation(self) -> Optional[float]:
        """Exact total variation of F when the representation allows it."""
        return None

    def equals(self, other: "Primitive") -> bool:
        return self is other


def _check_limits(limit_neg: float, limit_pos: float):
    if not (math.isfinite(limit_neg) and math.isfinite(limit_pos)):
        raise ValueError("a primitive needs finite limits at both infinities")


class PiecewiseLinearPrimitive(Primitive):
    """Node table (x_i, F_i); F is linear between nodes and constant outside."""

    def __init__(self, xs, ys, label: str = ""):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
            raise ValueError("need matching 1-d arrays with at least two nodes")
        if not np.all(np.diff(xs) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("table entries must be finite")
        self.xs = xs
        self.ys = ys
        self.limit_neg = float(ys[0])
        self.limit_pos = float(ys[-1])
        self.label = label
        self._cum = None

    def eval(self, x):
        scalar = np.isscalar(x)
        out = np.interp(np.asarray(x, dtype=float), self.xs, self.ys)
        return float(out) if scalar else out

    def breakpoints(self):
        return self.xs

    def support_window(self):
        return (float(self.xs[0]), float(self.xs[-1]))

    def shifted(self, dx: float):
        if dx == 0.0:
            return self
        return PiecewiseLinearPrimitive(self.xs + dx, self.ys, self.label)

    def scaled(self, c: float):
        return PiecewiseLinearPrimitive(self.xs, self.ys * c, self.label)

    def extrema(self):
        return (float(self.ys.min()), float(self.ys.max()))

    def _cumulative(self):
        # node antiderivative of F; exact because F is linear on each piece
        if self._cum is None:
            seg = 0.5 * (self.ys[1:] + self.ys[:-1]) * np.diff(self.xs)
            self._cum = np.concatenate([[0.0], np.cumsum(seg)])
        return self._cum

    def _antideriv_at(self, t: float) -> float:
        cum = self._cumulative()
        if t <= self.xs[0]:
            return float((t - self.xs[0]) * self.ys[0])
        if t >= self.xs[-1]:
            return float(cum[-1] + (t - self.xs[-1]) * self.ys[-1])
        i = int(np.searchsorted(self.xs, t, side="right") - 1)
        dt = t - self.xs[i]
        slope = (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
        return float(cum[i] + self.ys[i] * dt + 0.5 * slope * dt * dt)

    def window_integral(self, u: float, v: float) -> float:
        return self._antideriv_at(v) - self._antideriv_at(u)

    def pointwise_derived(self):
        slopes = np.diff(self.ys) / np.diff(self.xs)
        xs = self.xs

        def step(y):
            y = np.asarray(y, dtype=float)
            idx = np.clip(np.searchsorted(xs, y, side="right") - 1, 0, len(slopes) - 1)
            out = slopes[idx]
            return np.where((y < xs[0]) | (y >= xs[-1]), 0.0, out)

        return step

    def total_variation(self):
        return float(np.abs(np.diff(self.ys)).sum())

    def equals(self, other):
        return (
            isinstance(other, PiecewiseLinearPrimitive)
            and np.array_equal(self.xs, other.xs)
            and np.array_equal(self.ys, other.ys)
        )


class PiecewiseChebyshevPrimitive(Primitive):
    """Adaptive panel representation: per panel a Chebyshev series for f,
    and its exact antiderivative for F.  Constant outside the panel range."""

    def __init__(self, edges, f_coefs, F_edge0: float = 0.0, label: str = "",
                 tail_estimated: bool = False):
        edges = np.asarray(edges, dtype=float)
        f_coefs = np.asarray(f_coefs, dtype=float)
        if edges.ndim != 1 or len(edges) < 2 or not np.all(np.diff(edges) > 0):
            raise ValueError("panel edges must be strictly increasing")
        if f_coefs.shape[0] != len(edges) - 1:
            raise ValueError("one coefficient row per panel required")
        self.edges = edges
        self.fc = f_coefs
        n, d = f_coefs.shape
        hw = 0.5 * np.diff(edges)
        Fc = np.zeros((n, d + 1))
        for i in range(n):
            Fc[i] = hw[i] * _cheb.chebint(f_coefs[i])
        # chain panels so F is continuous and F(edges[0]) = F_edge0
        F_edges = np.empty(n + 1)
        F_edges[0] = F_edge0
        for i in range(n):
            left = _cheb.chebval(-1.0, Fc[i])
            Fc[i][0] += F_edges[i] - left
            F_edges[i + 1] = _cheb.chebval(1.0, Fc[i])
        self.Fc = Fc
        self.F_edges = F_edges
        self.limit_neg = float(F_edges[0])
        self.limit_pos = float(F_edges[-1])
        self.label = label
        self.tail_estimated = tail_estimated
        self._extrema_cache = {}
        self._SF = None

    def _local(self, x: np.ndarray, idx: np.ndarray) -> np.ndarray:
        a = self.edges[idx]
        b = self.edges[idx + 1]
        return np.clip((2.0 * x - a - b) / (b - a), -1.0, 1.0)

    def _eval_coef(self, x, coef_rows, below: float, above: float,
                   at_neg: float, at_pos: float):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        neg = np.isneginf(x)
        pos = np.isposinf(x)
        out[neg] = at_neg
        out[pos] = at_pos
        lo_mask = (x <= self.edges[0]) & ~neg
        hi_mask = (x >= self.edges[-1]) & ~pos
        out[lo_mask] = below
        out[hi_mask] = above
        mid = ~(lo_mask | hi_mask | neg | pos)
        if mid.any():
            xm = x[mid]
            idx = np.clip(np.searchsorted(self.edges, xm, side="right") - 1,
                          0, len(self.edges) - 2)
            xi = self._local(xm, idx)
            vals = np.empty_like(xm)
            for i in np.unique(idx):
                m = idx == i
                vals[m] = _cheb.chebval(xi[m], coef_rows[i])
            out[mid] = vals
        return float(out[0]) if scalar else out

    def eval(self, x):
        # finite points outside the panel range sit at the edge values; the
        # declared limits (which may differ by an estimated tail mass) are
        # returned exactly at +-inf
        return self._eval_coef(x, self.Fc, float(self.F_edges[0]),
                               float(self.F_edges[-1]),
                               self.limit_neg, self.limit_pos)

    def pointwise_derived(self):
        def f(y):
            return self._eval_coef(y, self.fc, 0.0, 0.0, 0.0, 0.0)
        return f

    def breakpoints(self):
        return self.edges

    def support_window(self):
        return (float(self.edges[0]), float(self.edges[-1]))

    def shifted(self, dx: float):
        if dx == 0.0:
            return self
        out = PiecewiseChebyshevPrimitive.__new__(PiecewiseChebyshevPrimitive)
        out.edges = self.edges + dx
        out.fc = self.fc
        out.Fc = self.Fc
        out.F_edges = self.F_edges
        out.limit_neg = self.limit_neg
        out.limit_pos = self.limit_pos
        out.label = self.label
        out.tail_estimated = self.tail_estimated
        out._extrema_cache = self._extrema_cache  # extrema are shift invariant
        out._SF = None
        return out

    def scaled(self, c: float):
        out = PiecewiseChebyshevPrimitive(
            self.edges, self.fc * c, F_edge0=float(self.F_edges[0]) * c,
            label=self.label, tail_estimated=self.tail_estimated)
        out.limit_neg = self.limit_neg * c
        out.limit_pos = self.limit_pos * c
        return out

    def _panel_critical(self, i: int) -> np.ndarray:
        """Local coordinates of the derivative's real roots inside panel i."""
        cf = _cheb.chebtrim(self.fc[i], tol=0.0)
        if len(cf) <= 1:
            return np.empty(0)
        roots = _cheb.chebroots(cf)
        roots = roots[np.abs(roots.imag) < 1e-9].real
        return roots[(roots > -1.0) & (roots < 1.0)]

    def extrema(self):
        key = "ext"
        if key not in self._extrema_cache:
            lo = min(float(self.F_edges.min()), self.limit_neg, self.limit_pos)
            hi = max(float(self.F_edges.max()), self.limit_neg, self.limit_pos)
            for i in range(len(self.fc)):
                xi = self._panel_critical(i)
                if len(xi):
                    vals = _cheb.chebval(xi, self.Fc[i])
                    lo = min(lo, float(np.min(vals)))
                    hi = max(hi, float(np.max(vals)))
            self._extrema_cache[key] = (lo, hi)
        return self._extrema_cache[key]

    def total_variation(self):
        key = "tv"
        if key not in self._extrema_cache:
            total = 0.0
            for i in range(len(self.fc)):
                xi = np.sort(self._panel_critical(i))
                nodes = np.concatenate([[-1.0], xi, [1.0]])
                vals = _cheb.chebval(nodes, self.Fc[i])
                total += float(np.abs(np.diff(vals)).sum())
            self._extrema_cache[key] = total
        return self._extrema_cache[key]

    def _antideriv(self):
        if self._SF is None:
            n = len(self.fc)
            hw = 0.5 * np.diff(self.edges)
            SFc = np.zeros((n, self.Fc.shape[1] + 1))
            SF_edges = np.empty(n + 1)
            SF_edges[0] = 0.0
            for i in range(n):
                SFc[i] = hw[i] * _cheb.chebint(self.Fc[i])
                left = _cheb.chebval(-1.0, SFc[i])
                SFc[i][0] += SF_edges[i] - left
                SF_edges[i + 1] = _cheb.chebval(1.0, SFc[i])
            self._SF = (SFc, SF_edges)
        return self._SF

    def _antideriv_at(self, t: float) -> float:
        SFc, SF_edges = self._antideriv()
        if t <= self.edges[0]:
            return float((t - self.edges[0]) * self.limit_neg)
        if t >= self.edges[-1]:
            return float(SF_edges[-1] + (t - self.edges[-1]) * self.limit_pos)
        i = int(np.clip(np.searchsorted(self.edges, t, side="right") - 1,
                        0, len(self.edges) - 2))
        xi = self._local(np.asarray([t]), np.asarray([i]))[0]
        return float(_cheb.chebval(xi, SFc[i]))

    def window_integral(self, u: float, v: float) -> float:
        return self._antideriv_at(v) - self._antideriv_at(u)

    def equals(self, other):
        return (
            isinstance(other, PiecewiseChebyshevPrimitive)
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.fc, other.fc)
            and self.limit_neg == other.limit_neg
        )


class ClosedFormPrimitive(Primitive):
    """F given by a vectorized closed-form evaluator plus declared limits.

    ``scan`` is the window where F is allowed to vary appreciably; extrema and
    norms are grid estimates on that window (refined by bounded minimization),
    so closed-form oscillations are estimates, never upper bounds.
    """

    def __init__(self, func: Evaluator, limit_neg: float, limit_pos: float,
                 scan, support=None, label: str = ""):
        _check_limits(limit_neg, limit_pos)
        self.func = func
        self.limit_neg = float(limit_neg)
        self.limit_pos = float(limit_pos)
        self.scan = (float(scan[0]), float(scan[1]))
        self.support = None if support is None else (float(support[0]), float(support[1]))
        self.shift = 0.0
        self.label = label
        self._extrema_cache = {}

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        neg = np.isneginf(x)
        pos = np.isposinf(x)
        fin = ~(neg | pos)
        out[neg] = self.limit_neg
        out[pos] = self.limit_pos
        if fin.any():
            out[fin] = _call_vec(self.func, x[fin] - self.shift)
        return float(out[0]) if scalar else out

    def support_window(self):
        win = self.support if self.support is not None else self.scan
        return (win[0] + self.shift, win[1] + self.shift)

    def shifted(self, dx: float):
        if dx == 0.0:
            return self
        out = ClosedFormPrimitive(self.func, self.limit_neg, self.limit_pos,
                                  self.scan, self.support, self.label)
        out.shift = self.shift + dx
        out._extrema_cache = self._extrema_cache  # extrema are shift invariant
        return out

    def scaled(self, c: float):
        base = self.func
        sh = self.shift
        return ClosedFormPrimitive(lambda y: c * _call_vec(base, y - sh),
                                   c * self.limit_neg, c * self.limit_pos,
                                   (self.scan[0] + sh, self.scan[1] + sh),
                                   None if self.support is None else
                                   (self.support[0] + sh, self.support[1] + sh),
                                   self.label)

    def extrema(self, levels: int = 17):
        key = levels
        if key not in self._extrema_cache:
            lo, hi = grid_extrema(
                lambda y: _call_vec(self.func, y),
                self.scan, levels=levels,
                include=(self.limit_neg, self.limit_pos))
            self._extrema_cache[key] = (lo, hi)
        return self._extrema_cache[key]

    def window_integral(self, u: float, v: float) -> float:
        if v < u:
            return -self.window_integral(v, u)
        span = v - u
        if span == 0.0:
            return 0.0
        panels = max(1, int(math.ceil(span / 2.0)))
        pts = np.linspace(u, v, panels + 1)
        return float(sum(gl_integral(self.eval, pts[i], pts[i + 1], 32)
                         for i in range(panels)))

    def equals(self, other):
        return (
            isinstance(other, ClosedFormPrimitive)
            and self.func is other.func
            and self.shift == other.shift
            and self.limit_neg == other.limit_neg
            and self.limit_pos == other.limit_pos
        )


# ---------------------------------------------------------------------------
# Integrand
# ---------------------------------------------------------------------------


class Integrand:
    """An integrable object: a primitive plus an optional pointwise evaluator.

    Equality is by primitive; pointwise values on null sets never matter.
    """

    __slots__ = ("primitive", "pointwise", "label")

    def __init__(self, primitive: Primitive, pointwise: Optional[Evaluator] = None,
                 label: str = ""):
        self.primitive = primitive
        self.pointwise = pointwise
        self.label = label or primitive.label

    def pointwise_or_derived(self) -> Optional[Evaluator]:
        if self.pointwise is not None:
            return self.pointwise
        return self.primitive.pointwise_derived()

    def __eq__(self, other):
        if not isinstance(other, Integrand):
            return NotImplemented
        return self.primitive.equals(other.primitive)

    def __hash__(self):
        return id(self.primitive.__class__).__hash__()

    def __repr__(self):
        return f"Integrand({self.label or self.primitive.__class__.__name__})"


# ---------------------------------------------------------------------------
# Basic operations
# ---------------------------------------------------------------------------


def eval_primitive(F: Primitive, x: float) -> float:
    """F(x) on the extended real line; limits are returned at +-inf."""
    return float(F.eval(x))


def integral(f: Integrand, I) -> float:
    """The integral of f over I, computed as F(b) - F(a)."""
    I = _as_interval(I)
    F = f.primitive
    return eval_primitive(F, I.b) - eval_primitive(F, I.a)


def _resolve_samplable(h, I: Interval):
    """Common preamble of variation/oscillation: evaluator, finite window, seeds."""
    if isinstance(h, Integrand):
        h = h.primitive
    if isinstance(h, Primitive):
        ev = h.eval
        lo, hi = h.support_window()
        a = I.a if math.isfinite(I.a) else lo
        b = I.b if math.isfinite(I.b) else hi
        a, b = min(a, b), max(a, b)
        if a == b:
            b = a + 1.0
        bp = h.breakpoints()
        seeds = () if bp is None else bp
        return ev, Interval(a, b), seeds
    if not I.finite:
        raise ValueError("an unbounded interval needs a Primitive operand")
    return (lambda y: _call_vec(h, y)), I, ()


def variation(h, I, levels: int = 12, extra_points: Sequence[float] = ()) -> float:
    """Lower estimate of the total variation of h over I.

    Sums |h(p_{k+1}) - h(p_k)| over a dyadic refinement with 2**levels + 1
    points, augmented with the breakpoints of table representations (which
    makes the result exact for piecewise-monotone tables).  Estimates are
    monotone nondecreasing in ``levels`` and never exceed the true variation.
    """
    I = _as_interval(I)
    if I.length == 0.0:
        return 0.0
    ev, win, seeds = _resolve_samplable(h, I)
    pts = np.asarray(Partition.dyadic(win, levels, tuple(seeds) + tuple(extra_points)).points)
    vals = ev(pts)
    return float(np.abs(np.diff(vals)).sum())


def oscillation(h, I, levels: int = 12, extra_points: Sequence[float] = ()) -> float:
    """sup h - inf h over I, estimated on the variation refinement scheme.

    For a Primitive on an unbounded interval the limit values participate.
    """
    I = _as_interval(I)
    if I.length == 0.0:
        return 0.0
    ev, win, seeds = _resolve_samplable(h, I)
    pts = np.asarray(Partition.dyadic(win, levels, tuple(seeds) + tuple(extra_points)).points)
    vals = ev(pts)
    lo = float(vals.min())
    hi = float(vals.max())
    if isinstance(h, Integrand):
        h = h.primitive
    if isinstance(h, Primitive):
        if not math.isfinite(I.a):
            lo, hi = min(lo, h.limit_neg), max(hi, h.limit_neg)
        if not math.isfinite(I.b):
            lo, hi = min(lo, h.limit_pos), max(hi, h.limit_pos)
    return hi - lo


def grid_extrema(ev: Evaluator, window, *, levels: int = 17, seeds: Sequence[float] = (),
                 include: Sequence[float] = (), refine: bool = True,
                 refine_count: int = 3) -> tuple:
    """(min, max) of a callable on a window: dense grid plus local refinement.

    ``include`` values (e.g. limits at infinity) join the candidate set as-is.
    Being a sampled supremum the result never overshoots the true extrema.
    """
    a, b = float(window[0]), float(window[1])
    pts = np.linspace(a, b, 2 ** levels + 1)
    if len(seeds):
        s = np.asarray(seeds, dtype=float)
        pts = np.union1d(pts, s[(s >= a) & (s <= b)])
    vals = _call_vec(ev, pts)
    lo = float(vals.min())
    hi = float(vals.max())
    if refine and len(pts) > 2:
        for sign in (1.0, -1.0):
            v = vals if sign > 0 else -vals
            order = np.argsort(v)[::-1][:refine_count]
            for i in order:
                l = pts[max(i - 1, 0)]
                r = pts[min(i + 1, len(pts) - 1)]
                if r <= l:
                    continue
                res = minimize_scalar(lambda t: -sign * float(_call_vec(ev, np.asarray([t]))[0]),
                                      bounds=(l, r), method="bounded",
                                      options={"xatol": 1e-12 * max(1.0, abs(r) + abs(l))})
                y = float(_call_vec(ev, np.asarray([res.x]))[0])
                lo = min(lo, y)
                hi = max(hi, y)
    for c in include:
        lo = min(lo, float(c))
        hi = max(hi, float(c))
    return lo, hi


# ---------------------------------------------------------------------------
# Adaptive construction of primitives from pointwise data
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _cheb_fit_matrix(npts: int):
    theta = (np.arange(npts) + 0.5) * np.pi / npts
    nodes = np.cos(theta)
    M = np.cos(np.outer(np.arange(npts), theta)) * (2.0 / npts)
    M[0] *= 0.5
    return nodes, M


def _cheb_integral(coefs: np.ndarray) -> float:
    # integral of a Chebyshev series over local coordinates [-1, 1]
    j = np.arange(0, len(coefs), 2)
    return float(np.dot(coefs[j], 2.0 / (1.0 - j * j)))


def _fit_panel(f_eval, a: float, b: float, npts: int):
    nodes, M = _cheb_fit_matrix(npts)
    hw = 0.5 * (b - a)
    xs = 0.5 * (a + b) + hw * nodes
    vals = _call_vec(f_eval, xs)
    coefs = M @ vals
    I_full = hw * _cheb_integral(coefs)
    I_half = hw * _cheb_integral(coefs[: max(2, npts // 2)])
    err = hw * (abs(coefs[-1]) + abs(coefs[-2])) + abs(I_full - I_half)
    return coefs, I_full, err


def build_primitive_from_pointwise(
    f_eval: Evaluator,
    support,
    tol: float,
    *,
    degree: int = 16,
    breakpoints: Sequence[float] = (),
    core_halfwidth: float = 64.0,
    tail_mode: str = "extrapolate",
    tail_values: Optional[tuple] = None,
    max_panels: int = 20000,
    label: str = "",
) -> PiecewiseChebyshevPrimitive:
    """Build F with F' = f_eval by globally adaptive Chebyshev panels.

    The total quadrature error over the core window is driven below ``tol``
    by splitting the worst panel first.  Infinite support endpoints are
    truncated to the core window and the remaining mass is estimated from
    doubling windows (geometric extrapolation); ``tail_mode='accelerate'``
    additionally applies an alternating-series transform for oscillatory
    decaying tails, and ``tail_values=(left, right)`` declares the masses
    outright.  Raises NonConvergentTail when the tail cannot be stabilized
    and ToleranceNotMet when the panel budget is exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    sup = _as_interval(support)
    left_inf = not math.isfinite(sup.a)
    right_inf = not math.isfinite(sup.b)
    a = sup.a if not left_inf else -core_halfwidth
    b = sup.b if not right_inf else core_halfwidth
    if b <= a:
        b = a + 2.0 * core_halfwidth
    npts = degree + 1

    hints = sorted({float(t) for t in breakpoints if a < t < b})
    edges0 = [a] + hints + [b]

    heap = []
    done = []
    seq = 0
    total_err = 0.0
    for i in range(len(edges0) - 1):
        c, Iv, e = _fit_panel(f_eval, edges0[i], edges0[i + 1], npts)
        heapq.heappush(heap, (-e, seq, edges0[i], edges0[i + 1], c, Iv))
        seq += 1
        total_err += e

    min_width = 64.0 * _EPS * max(1.0, abs(a), abs(b))
    while total_err > tol and heap:
        if len(heap) + len(done) >= max_panels:
            raise ToleranceNotMet(
                f"panel budget {max_panels} exhausted with error {total_err:.3e} > {tol:.3e}")
        neg_e, _, pa, pb, c, Iv = heapq.heappop(heap)
        e = -neg_e
        if pb - pa <= min_width:
            done.append((pa, pb, c, Iv, e))
            continue
        total_err -= e
        mid = 0.5 * (pa + pb)
        for qa, qb in ((pa, mid), (mid, pb)):
            c2, I2, e2 = _fit_panel(f_eval, qa, qb, npts)
            heapq.heappush(heap, (-e2, seq, qa, qb, c2, I2))
            seq += 1
            total_err += e2
    if total_err > tol:
        frozen = sum(e for *_, e in done)
        if frozen < total_err - tol:
            raise ToleranceNotMet(
                f"unsplittable panels leave error {total_err:.3e} > {tol:.3e}")

    panels = done + [(pa, pb, c, Iv, -ne) for ne, _, pa, pb, c, Iv in heap]
    panels.sort(key=lambda p: p[0])
    edges = np.asarray([p[0] for p in panels] + [panels[-1][1]])
    fcoefs = np.asarray([p[2] for p in panels])

    tail_estimated = False
    left_mass = 0.0
    right_mass = 0.0
    if left_inf:
        if tail_values is not None:
            left_mass = float(tail_values[0])
        else:
            left_mass = _tail_mass(f_eval, a, -1, tol, tail_mode)
            tail_estimated = True
    if right_inf:
        if tail_values is not None:
            right_mass = float(tail_values[1])
        else:
            right_mass = _tail_mass(f_eval, b, +1, tol, tail_mode)
            tail_estimated = True

    # convention: F(-inf) = 0, so the table starts at the mass left of the core
    out = PiecewiseChebyshevPrimitive(edges, fcoefs, F_edge0=left_mass, label=label,
                                      tail_estimated=tail_estimated)
    if left_inf:
        out.limit_neg = 0.0
    if right_inf:
        out.limit_pos = float(out.F_edges[-1] + right_mass)
    return out


def _tail_mass(f_eval, start: float, direction: int, tol: float, tail_mode: str) -> float:
    """Signed mass of f beyond ``start`` in the given direction.

    Windows double away from the core; each window integral is taken with the
    usual left-to-right orientation, so the sum is the tail's contribution to
    the primitive regardless of direction.
    """
    if tail_mode == "none":
        raise NonConvergentTail("infinite support and tail handling disabled")
    tail_tol = max(tol, 1e-13)
    t = start
    incs = []
    for _ in range(48):
        if abs(t) > 1e12:
            # beyond this, cancellation makes window integrals meaningless
            break
        t_next = direction * 2.0 * max(abs(t), 1.0)
        Iv = gl_integral(f_eval, min(t, t_next), max(t, t_next), 64)
        incs.append(Iv)
        t = t_next
        if len(incs) >= 3:
            last = np.abs(incs[-3:])
            if np.all(last[1:] <= last[:-1] * 0.9 + 1e-300) and abs(incs[-1]) < tail_tol:
                r = abs(incs[-1]) / abs(incs[-2]) if abs(incs[-2]) > 0 else 0.0
                total = float(np.sum(incs))
                if 0.0 < r < 0.95:
                    total += incs[-1] * r / (1.0 - r)
                return total
    if tail_mode == "accelerate":
        return _oscillatory_tail(f_eval, start, direction, tail_tol)
    raise NonConvergentTail(
        "doubling-window tail integrals did not stabilize; "
        "declare tail_values or use tail_mode='accelerate'")


def _oscillatory_tail(f_eval, start: float, direction: int, tol: float) -> float:
    """Half-period-window tail summation accelerated by the epsilon algorithm."""
    probe = start + direction * np.linspace(0.0, 60.0, 8192)
    vals = _call_vec(f_eval, probe)
    sign_flip = np.nonzero(np.diff(np.signbit(vals)))[0]
    if len(sign_flip) < 4:
        raise NonConvergentTail("tail is not oscillatory; acceleration does not apply")
    crossings = probe[sign_flip]
    spacing = float(np.median(np.abs(np.diff(crossings))))
    if not (spacing > 0):
        raise NonConvergentTail("could not detect an oscillation scale in the tail")
    partial = [0.0]
    t = start
    for _ in range(400):
        t_next = t + direction * spacing
        Iv = gl_integral(f_eval, min(t, t_next), max(t, t_next), 24)
        partial.append(partial[-1] + Iv)
        t = t_next
        if len(partial) >= 12 and len(partial) % 4 == 0:
            est, stable = _wynn_epsilon(np.asarray(partial[1:]))
            if stable < tol:
                return float(est)
    raise NonConvergentTail("oscillatory tail acceleration did not converge")


def _wynn_epsilon(S: np.ndarray):
    """Epsilon-algorithm estimate of lim S_n; returns (value, stability)."""
    prev_col = np.zeros(len(S))
    curr = S.astype(float)
    best = float(curr[-1])
    prev_best = float(curr[0])
    col = 0
    while len(curr) >= 2:
        diffs = np.diff(curr)
        if np.any(diffs == 0.0):
            break
        nxt = prev_col[1:len(curr)] + 1.0 / diffs
        if not np.all(np.isfinite(nxt)):
            break
        prev_col = curr
        curr = nxt
        col += 1
        if col % 2 == 0:
            prev_best = best
            best = float(curr[-1])
    return best, abs(best - prev_best)
