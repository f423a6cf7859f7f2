"""Poisson integrals on the unit disc and the upper half-plane.

Disc: u_r(theta) = (1-r^2)/(2pi) * integral of f(phi) / (1 - 2r cos(phi-theta) + r^2).
The kernel's antiderivative is available in closed form,

    A_r(alpha) = (1/pi) * arctan(((1+r)/(1-r)) tan(alpha/2)),

so piecewise-constant boundary data integrates exactly; smooth data uses the
periodic midpoint rule with node doubling.

Half-plane: with Phi_y(u) = y / (pi (u^2 + y^2)) and a weight w, the value at
z = (x, y) is taken through integration by parts against G(t) = integral of fw:

    u_y(x) = G(inf) * Psi_z(+inf) - integral of G(t) Psi_z'(t) dt,
    Psi_z(t) = Phi_y(x - t) / w(t),

which stays meaningful for boundary data that is not integrable on its own
(e.g. constants).  The truncated integral carries a certified tail bound; the
window doubles until the bound clears the tolerance or TailBoundFailure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import KernelSingularity, TailBoundFailure, ToleranceNotMet
from .norms import GapReport
from .realfn import (Integrand, Interval, PiecewiseLinearPrimitive, _as_interval,
                     _call_vec, build_primitive_from_pointwise, gauss_nodes,
                     variation)
from .weights import Weight, _resolve_pointwise, _weighted_gap_single, product_integrand

TWO_PI = 2.0 * math.pi

POISSON_CSV_HEADER = "param,gap,majorant,passed"


def serialize_poisson_reports(reports: Sequence[GapReport]) -> str:
    """CSV for boundary-convergence tables, rows in ladder order."""
    lines = [POISSON_CSV_HEADER]
    for r in reports:
        maj = "" if r.bound_upper is None else format(r.bound_upper, ".17g")
        lines.append(",".join([format(r.x, ".17g"), format(r.gap, ".17g"), maj,
                               "true" if r.passed else "false"]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Unit disc
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodicIntegrand:
    """2*pi-periodic boundary data, represented by one period on [-pi, pi]."""

    base: Integrand

    def __post_init__(self):
        lo, hi = self.base.primitive.support_window()
        if lo < -math.pi - 1e-9 or hi > math.pi + 1e-9:
            raise ValueError("the base integrand must live on [-pi, pi]")

    def pointwise(self, phi):
        pt = self.base.pointwise_or_derived()
        if pt is None:
            raise ValueError("no pointwise data for the boundary function")
        phi = np.asarray(phi, dtype=float)
        wrapped = np.mod(phi + math.pi, TWO_PI) - math.pi
        return _call_vec(pt, wrapped)

    def mean(self) -> float:
        F = self.base.primitive
        return (F.eval(math.pi) - F.eval(-math.pi)) / TWO_PI

    def pieces(self) -> Optional[tuple]:
        """(edges, values) when f is piecewise constant on its period."""
        F = self.base.primitive
        if isinstance(F, PiecewiseLinearPrimitive):
            slopes = np.diff(F.ys) / np.diff(F.xs)
            return F.xs, slopes
        return None


def disc_kernel(r: float, alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    return (1.0 - r * r) / (TWO_PI * (1.0 - 2.0 * r * np.cos(alpha) + r * r))


def _disc_cdf(r: float, alpha: float) -> float:
    # antiderivative of the kernel on (-pi, pi), normalized to +-1/2 at +-pi
    K = (1.0 + r) / (1.0 - r)
    return math.atan(K * math.tan(0.5 * alpha)) / math.pi


def disc_kernel_mass(r: float, a: float, b: float) -> float:
    """Kernel mass over an arc [a, b] with 0 <= b - a <= 2*pi."""
    width = b - a
    if width < 0 or width > TWO_PI * (1.0 + 1e-12):
        raise ValueError("arc width must lie in [0, 2*pi]")
    if width >= TWO_PI * (1.0 - 1e-15):
        return 1.0
    a_red = math.remainder(a, TWO_PI)  # in [-pi, pi]
    b_red = a_red + width
    if b_red <= math.pi:
        return _disc_cdf(r, b_red) - _disc_cdf(r, a_red)
    return (0.5 - _disc_cdf(r, a_red)) + (_disc_cdf(r, b_red - TWO_PI) + 0.5)


def poisson_disc(f: PeriodicIntegrand, r: float, theta: float,
                 tol: float = 1e-10, max_nodes: int = 2 ** 19) -> float:
    """Harmonic extension of periodic boundary data, evaluated at r e^{i theta}."""
    if r < 0:
        raise ValueError("the radius must be nonnegative")
    if r >= 1.0:
        raise KernelSingularity(f"radius {r} is not inside the unit disc")
    pieces = f.pieces()
    if pieces is not None:
        edges, values = pieces
        total = 0.0
        for i, v in enumerate(values):
            if v != 0.0:
                total += v * disc_kernel_mass(r, edges[i] - theta, edges[i + 1] - theta)
        return total
    # periodic midpoint rule with node doubling; spectrally accurate
    prev = None
    N = 64
    while N <= max_nodes:
        phis = -math.pi + (np.arange(N) + 0.5) * (TWO_PI / N)
        u = float((TWO_PI / N) * np.dot(f.pointwise(phis), disc_kernel(r, phis - theta)))
        if prev is not None and abs(u - prev) <= tol * max(1.0, abs(u)):
            return u
        prev = u
        N *= 2
    raise ToleranceNotMet(f"periodic rule did not converge below {tol}")


def disc_boundary_convergence(f: PeriodicIntegrand, rs: Sequence[float],
                              build_tol: float = 1e-8) -> List[GapReport]:
    """||u_r - f|| over one period along a radius ladder."""
    bp = f.base.primitive.breakpoints()
    hints = () if bp is None else tuple(bp)
    reports = []
    for r in rs:
        def err(phi, r=r):
            phi = np.asarray(phi, dtype=float)
            u = np.asarray([poisson_disc(f, r, t, tol=build_tol * 1e-2) for t in np.ravel(phi)])
            return u.reshape(phi.shape) - f.pointwise(phi)

        P = build_primitive_from_pointwise(err, Interval(-math.pi, math.pi),
                                           build_tol, breakpoints=hints)
        lo, hi = P.extrema()
        reports.append(GapReport(x=r, gap=hi - lo, passed=True))
    return reports


# ---------------------------------------------------------------------------
# Upper half-plane
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError("half-plane points need y > 0")


def halfplane_kernel(y: float, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return y / (math.pi * (u * u + y * y))


def halfplane_kernel_mass(y: float, a: float, b: float) -> float:
    return (math.atan2(b, y) - math.atan2(a, y)) / math.pi


@dataclass(frozen=True)
class KernelPair:
    """The half-plane kernel at a point z, paired with a weight: Phi(t),
    Psi(t) = Phi(t)/w(t), its derivative, and the limits of Psi at +-inf."""

    z: HalfPlanePoint
    Phi: Callable
    Psi: Callable
    Psi_prime: Callable
    psi_lim_neg: float
    psi_lim_pos: float


def kernel_pair(w: Weight, z: HalfPlanePoint) -> KernelPair:
    x, y = z.x, z.y

    def Phi(t):
        return halfplane_kernel(y, x - np.asarray(t, dtype=float))

    def Psi(t):
        t = np.asarray(t, dtype=float)
        return Phi(t) / w(t)

    def Phi_prime(t):
        t = np.asarray(t, dtype=float)
        u = x - t
        return (y / math.pi) * 2.0 * u / (u * u + y * y) ** 2

    def Psi_prime(t):
        t = np.asarray(t, dtype=float)
        wv = w(t)
        return (Phi_prime(t) * wv - Phi(t) * w.derivative(t)) / (wv * wv)

    limit_fn = getattr(w, "kernel_ratio_limit", None)
    if limit_fn is not None:
        lim_neg, lim_pos = limit_fn(z)
    else:
        lim_neg = _psi_limit(Psi, -1.0)
        lim_pos = _psi_limit(Psi, +1.0)
    return KernelPair(z=z, Phi=Phi, Psi=Psi, Psi_prime=Psi_prime,
                      psi_lim_neg=lim_neg, psi_lim_pos=lim_pos)


def _psi_limit(Psi, direction: float) -> float:
    # one Richardson step on samples at t and 10t kills the O(1/t) term
    t = direction * 1e7
    v1 = float(_call_vec(Psi, np.asarray([t]))[0])
    v2 = float(_call_vec(Psi, np.asarray([10.0 * t]))[0])
    est = v2 + (v2 - v1) / 9.0
    v3 = float(_call_vec(Psi, np.asarray([100.0 * t]))[0])
    est2 = v3 + (v3 - v2) / 9.0
    if abs(est2 - est) > 1e-6 * (1.0 + abs(est2)):
        raise TailBoundFailure("the kernel/weight ratio has no stable limit")
    return est2


class HalfPlaneOperator:
    """Evaluates the weighted-parts form of the half-plane Poisson integral.

    The product primitive G is built once per (f, w) pair and reused across
    evaluation points.
    """

    def __init__(self, f, w: Weight, *, build_tol: float = 1e-10,
                 core_halfwidth: float = 4096.0):
        self.f = f
        self.w = w
        self.fw = product_integrand(f, w, tol=build_tol, core_halfwidth=core_halfwidth)
        self.G = self.fw.primitive
        self.G_inf = self.G.limit_pos

    def value(self, z: HalfPlanePoint, tol: float = 1e-6) -> float:
        kp = kernel_pair(self.w, z)
        G = self.G
        T = max(50.0 * z.y, 50.0)
        for _ in range(14):
            TL, TR = z.x - T, z.x + T
            psiR = float(_call_vec(kp.Psi, np.asarray([TR]))[0])
            psiL = float(_call_vec(kp.Psi, np.asarray([TL]))[0])
            dR = abs(kp.psi_lim_pos - psiR)
            dL = abs(psiL - kp.psi_lim_neg)
            # residual after the first-order tail corrections below; the
            # factor 2 covers non-monotone kernel tails
            resid = 2.0 * (abs(self.G_inf - G.eval(TR)) * dR + abs(G.eval(TL)) * dL)
            if resid <= 0.5 * tol:
                break
            T *= 2.0
        else:
            raise TailBoundFailure(
                f"tail bound {resid:.3e} above {0.5 * tol:.3e} after window doubling")

        edges = self._panel_edges(z, TL, TR)
        nodes, wts = gauss_nodes(32)
        quad = 0.0
        for i in range(len(edges) - 1):
            a, b = edges[i], edges[i + 1]
            mid = 0.5 * (a + b)
            hw = 0.5 * (b - a)
            ts = mid + hw * nodes
            quad += hw * float(np.dot(wts, G.eval(ts) * kp.Psi_prime(ts)))
        # first-order tail corrections: G ~ G_inf right of TR, G ~ G(TL) left
        quad += self.G_inf * (kp.psi_lim_pos - psiR)
        quad += G.eval(TL) * (psiL - kp.psi_lim_neg)
        return self.G_inf * kp.psi_lim_pos - quad

    def _panel_edges(self, z: HalfPlanePoint, TL: float, TR: float) -> np.ndarray:
        offs = [0.0]
        d = z.y
        while z.x + d < TR or z.x - d > TL:
            offs.append(d)
            d *= 2.0
        pts = [z.x + o for o in offs] + [z.x - o for o in offs[1:]] + [TL, TR]
        wb = self.w.breakpoints()
        if wb is not None:
            pts.extend(wb)
        fbp = None
        if isinstance(self.f, Integrand):
            fbp = self.f.primitive.breakpoints()
        gbp = self.G.breakpoints()
        if gbp is not None and len(gbp) <= 64:
            pts.extend(gbp)
        if fbp is not None:
            pts.extend(fbp)
        pts = np.asarray(pts, dtype=float)
        pts = np.unique(pts[(pts >= TL) & (pts <= TR)])
        return pts


def poisson_halfplane(f, w: Weight, z: HalfPlanePoint, tol: float = 1e-6) -> float:
    """One-shot evaluation of the weighted-parts Poisson integral."""
    return HalfPlaneOperator(f, w).value(z, tol)


def halfplane_weighted_convergence(f, w: Weight, ys: Sequence[float], I,
                                   tol: float = 1e-6, build_tol: float = 1e-7,
                                   point_tol: float = 1e-6,
                                   s_nodes: int = 64) -> List[GapReport]:
    """||(u_y - f) w|| on I along a boundary ladder, with the kernel-averaged
    majorant integral of Phi_y(s) ||(tau_s f - f) w|| attached to each row."""
    I = _as_interval(I)
    op = HalfPlaneOperator(f, w)
    fp = _resolve_pointwise(f)
    bp = None
    if isinstance(f, Integrand):
        bp = f.primitive.breakpoints()
    hints = () if bp is None else tuple(bp)

    def gamma(s: float) -> float:
        if s == 0.0:
            return 0.0
        gap, _ = _weighted_gap_single(f, fp, w, op.G, s, build_tol, 64.0)
        return gap

    reports = []
    for y in sorted(ys, key=lambda t: -abs(t)):
        def err(t, y=y):
            t = np.asarray(t, dtype=float)
            u = np.asarray([op.value(HalfPlanePoint(float(ti), y), tol=point_tol)
                            for ti in np.ravel(t)])
            return (u.reshape(t.shape) - _call_vec(fp, t)) * w(t)

        P = build_primitive_from_pointwise(err, I, build_tol, breakpoints=hints)
        lo, hi = P.extrema()
        gap = hi - lo

        S = max(200.0 * y, 2.0)
        nodes, wts = gauss_nodes(s_nodes)
        ss = 0.5 * S * (nodes + 1.0)  # positive half; gamma is even in s
        gs = np.asarray([gamma(float(s)) for s in ss])
        phis = halfplane_kernel(y, ss)
        majorant = float(2.0 * 0.5 * S * np.dot(wts, gs * phis))
        tail_fraction = 1.0 - halfplane_kernel_mass(y, -S, S)
        majorant += 2.0 * tail_fraction * float(gs.max(initial=0.0))
        reports.append(GapReport(x=y, gap=gap, bound_upper=majorant,
                                 passed=gap <= majorant + tol))
    return reports


@dataclass(frozen=True)
class KernelBVReport:
    V_Psi: float
    V_invPsi: float
    bounded: bool


def kernel_bv_audit(w: Weight, z: HalfPlanePoint, window,
                    levels: int = 14) -> KernelBVReport:
    """Variation of Psi_z and 1/Psi_z on a window, with refinement stability."""
    window = _as_interval(window)
    kp = kernel_pair(w, z)
    inv = lambda t: 1.0 / kp.Psi(t)
    seeds = () if w.breakpoints() is None else tuple(w.breakpoints())
    v1 = variation(kp.Psi, window, levels, extra_points=seeds)
    v1b = variation(kp.Psi, window, levels + 1, extra_points=seeds)
    v2 = variation(inv, window, levels, extra_points=seeds)
    v2b = variation(inv, window, levels + 1, extra_points=seeds)
    stable = (abs(v1b - v1) <= max(1e-6, 5e-3 * (1.0 + v1b))
              and abs(v2b - v2) <= max(1e-6, 5e-3 * (1.0 + v2b)))
    return KernelBVReport(V_Psi=v1b, V_invPsi=v2b,
                          bounded=stable and math.isfinite(v1b) and math.isfinite(v2b))
