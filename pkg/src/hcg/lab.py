"""Experiments built on the engine: VSI sweeps, level sets of scalar
invariants, geodesic slice distances, Walker alpha classification, the
Gaussian variable-homogeneity construction and homothety characters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import hermite

from . import jets as J
from .jets import Jet, apply_derivatives
from .tensors import (
    WEYL_ORDERS,
    DegenerateMetricError,
    DomainError,
    MetricField,
    christoffel,
    curvature_derivatives,
    invariant_jet,
    weyl_scalars,
)


class VanishingInvariantError(ValueError):
    pass


class GeodesicDomainExit(RuntimeError):
    """The geodesic left the chart; ``arc_length`` is where it happened."""

    def __init__(self, msg: str, arc_length: float, state: "GeodesicState"):
        super().__init__(msg)
        self.arc_length = arc_length
        self.state = state


class LevelNotReached(RuntimeError):
    pass


class QuadratureError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# VSI


@dataclass(frozen=True)
class VSIResult:
    vsi: bool
    max_abs: float
    worst_invariant: str
    worst_sample: int


def vsi_sweep(g: MetricField, samples, tol: float = 1e-10) -> VSIResult:
    """VSI verdict: every catalogue invariant at every sample is at most ``tol``."""
    worst, name, where = -1.0, "", -1
    for i, p in enumerate(samples):
        for n, v in weyl_scalars(g, p).values.items():
            if abs(v) > worst:
                worst, name, where = abs(v), n, i
    return VSIResult(worst <= tol, max(worst, 0.0), name, where)


# ---------------------------------------------------------------------------
# level sets of a scalar invariant


@dataclass(frozen=True)
class LevelSetProbe:
    """``mu(P) = |I(P0) / I(P)|^(1/l)`` for a catalogue invariant ``I`` of order ``l``."""

    invariant: str
    base_point: tuple[float, ...]

    @property
    def order(self) -> int:
        return WEYL_ORDERS[self.invariant]


ZERO_INVARIANT = 1e-10


def _invariant_value(g: MetricField, name: str, p) -> float:
    v = invariant_jet(g, p, name, order=0).value
    if abs(v) <= ZERO_INVARIANT or not math.isfinite(v):
        raise VanishingInvariantError(f"invariant {name!r} vanishes at {list(map(float, p))}: mu undefined")
    return v


def mu_level(probe: LevelSetProbe, g: MetricField, point) -> float:
    ref = _invariant_value(g, probe.invariant, probe.base_point)
    val = _invariant_value(g, probe.invariant, point)
    return abs(ref / val) ** (1.0 / probe.order)


def mu_gradient(probe: LevelSetProbe, g: MetricField, point) -> tuple[float, np.ndarray]:
    """``mu`` and its coordinate differential ``d mu`` at ``point``."""
    ref = _invariant_value(g, probe.invariant, probe.base_point)
    jet = invariant_jet(g, point, probe.invariant, order=1)
    if abs(jet.value) <= ZERO_INVARIANT:
        raise VanishingInvariantError(f"invariant {probe.invariant!r} vanishes at {list(map(float, point))}")
    m = g.dim
    l = probe.order
    mu = abs(ref / jet.value) ** (1.0 / l)
    dI = np.array(jet.coeffs[1 : 1 + m])
    return mu, -mu / l * dI / jet.value


# ---------------------------------------------------------------------------
# geodesics


@dataclass(frozen=True)
class GeodesicState:
    point: np.ndarray
    velocity: np.ndarray
    arc_length: float = 0.0


def _geodesic_rhs(g: MetricField, p: np.ndarray, v: np.ndarray):
    gam = christoffel(g, p).entries  # gam[i, j, k] = Gamma_ij^k
    return v, -np.einsum("ijk,i,j->k", gam, v, v)


def _rk4(g: MetricField, p: np.ndarray, v: np.ndarray, h: float):
    k1p, k1v = _geodesic_rhs(g, p, v)
    k2p, k2v = _geodesic_rhs(g, p + 0.5 * h * k1p, v + 0.5 * h * k1v)
    k3p, k3v = _geodesic_rhs(g, p + 0.5 * h * k2p, v + 0.5 * h * k2v)
    k4p, k4v = _geodesic_rhs(g, p + h * k3p, v + h * k3v)
    return p + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p), v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)


def speed(g: MetricField, state: GeodesicState) -> float:
    return float(state.velocity @ g.matrix(state.point) @ state.velocity)


def _step(g: MetricField, st: GeodesicState, h: float) -> GeodesicState:
    try:
        p, v = _rk4(g, st.point, st.velocity, h)
        g.check_point(p)
    except (DomainError, DegenerateMetricError) as exc:
        raise GeodesicDomainExit(f"geodesic left the domain near arc length {st.arc_length:g}", st.arc_length, st) from exc
    return GeodesicState(p, v, st.arc_length + h)


def geodesic_integrate(g: MetricField, state0: GeodesicState, length: float, h: float = 1e-3) -> list[GeodesicState]:
    """Classical RK4 on ``x''^k = -Gamma_ij^k x'^i x'^j``; unit initial speed required.

    Raises :class:`GeodesicDomainExit` (carrying the exit arc length) when a
    step leaves the metric's domain.
    """
    st = GeodesicState(np.asarray(state0.point, dtype=float), np.asarray(state0.velocity, dtype=float), state0.arc_length)
    s0 = speed(g, st)
    if abs(abs(s0) - 1.0) > 1e-9:
        raise ValueError(f"initial velocity must have |g(v, v)| = 1, got {s0:g}")
    n = max(1, int(math.ceil(length / h - 1e-12)))
    hh = length / n
    path = [st]
    for _ in range(n):
        st = _step(g, st, hh)
        path.append(st)
    return path


def unit_vector(g: MetricField, point, direction) -> np.ndarray:
    v = np.asarray(direction, dtype=float)
    n = float(v @ g.matrix(point) @ v)
    if abs(n) < 1e-300:
        raise ValueError("null direction cannot be normalized")
    return v / math.sqrt(abs(n))


# ---------------------------------------------------------------------------
# slices of constant mu


@dataclass(frozen=True)
class SliceDistance:
    distance: float
    kappa: float
    arc_c: float
    arc_d: float


def _gradient_direction(probe: LevelSetProbe, g: MetricField, point, sign: float) -> np.ndarray:
    _, dmu = mu_gradient(probe, g, point)
    grad = np.linalg.solve(g.matrix(point), dmu)
    return sign * unit_vector(g, point, grad)


def level_arc_lengths(
    g: MetricField,
    levels: Sequence[float],
    base_point,
    invariant: str = "tau",
    h: float = 1e-2,
    max_length: float = 100.0,
    tol: float = 1e-10,
) -> dict[float, float]:
    """Arc length along the radial geodesic from ``base_point`` to each level ``mu = c``.

    The geodesic starts along ``+grad mu`` for levels above 1 and along
    ``-grad mu`` for levels below 1; each crossing is refined by bisection on
    the step length.  Arc lengths are signed by direction.
    """
    probe = LevelSetProbe(invariant, tuple(float(x) for x in base_point))
    out: dict[float, float] = {}
    for sign in (1.0, -1.0):
        targets = sorted((c for c in levels if (c - 1.0) * sign > 0), key=lambda c: sign * c)
        if not targets:
            continue
        st = GeodesicState(np.asarray(base_point, dtype=float), _gradient_direction(probe, g, base_point, sign))
        mu_prev = 1.0
        queue = list(targets)
        while queue:
            if st.arc_length > max_length:
                raise LevelNotReached(f"level {queue[0]:g} not reached within arc length {max_length:g}")
            try:
                nxt = _step(g, st, h)
            except GeodesicDomainExit as exc:
                raise LevelNotReached(f"level {queue[0]:g} not reached before leaving the chart") from exc
            mu_next = mu_level(probe, g, nxt.point)
            while queue and (mu_next - queue[0]) * sign >= 0:
                c = queue.pop(0)
                lo, hi = 0.0, h
                while hi - lo > tol:
                    mid = 0.5 * (lo + hi)
                    p, _ = _rk4(g, st.point, st.velocity, mid)
                    if (mu_level(probe, g, p) - c) * sign >= 0:
                        hi = mid
                    else:
                        lo = mid
                out[c] = sign * (st.arc_length + 0.5 * (lo + hi))
            st, mu_prev = nxt, mu_next
    for c in levels:
        if c == 1.0:
            out[c] = 0.0
    return out


def slice_distance(g: MetricField, c: float, d: float, base_point, invariant: str = "tau", h: float = 1e-2) -> SliceDistance:
    """Distance between the slices ``mu = c`` and ``mu = d`` along the radial geodesic."""
    if c <= 0 or d <= 0:
        raise ValueError("levels must be positive")
    if c == d:
        return SliceDistance(0.0, float("nan"), 0.0, 0.0)
    arcs = level_arc_lengths(g, [c, d], base_point, invariant, h)
    dist = abs(arcs[c] - arcs[d])
    return SliceDistance(dist, dist / abs(c - d), arcs[c], arcs[d])


@dataclass(frozen=True)
class ProbeResult:
    status: str  # "finite" or "exceeded_budget"
    length: float
    mu_final: float
    budget: float


def _safe(g: MetricField, p) -> bool:
    try:
        christoffel(g, p)
    except (DomainError, DegenerateMetricError):
        return False
    return True


def incompleteness_probe(
    g: MetricField,
    base_point,
    direction=None,
    invariant: str = "tau",
    h: float = 0.05,
    budget: float | None = None,
    mu_stop: float = 1e-4,
) -> ProbeResult:
    """Arc length to the boundary along decreasing ``mu``, or ``exceeded_budget``.

    With a non-vanishing invariant the curve follows ``-grad mu / |grad mu|``
    with steps ``min(h, 0.1 mu / |dmu/ds|)``; at ``mu <= mu_stop mu(P0)`` the
    length is extrapolated as ``s + mu / |dmu/ds|``.  The default budget is
    ten times the initial estimate ``mu / |dmu/ds|``.

    When the invariant vanishes at ``base_point`` (flat metrics) ``direction``
    is followed as a geodesic and the remaining length to a blow-up of the
    coordinate velocity is estimated as ``|v| / |d|v|/ds|``; a complete
    direction runs into the budget (default 100).
    """
    p = np.asarray(base_point, dtype=float)
    probe = LevelSetProbe(invariant, tuple(p))
    try:
        ref = _invariant_value(g, invariant, p)
    except VanishingInvariantError:
        if direction is None:
            raise
        return _geodesic_blowup(g, p, direction, h, 100.0 if budget is None else budget)
    l = probe.order

    def field(q):
        jet = invariant_jet(g, q, invariant, order=1)
        if abs(jet.value) <= ZERO_INVARIANT:
            raise VanishingInvariantError(f"invariant {invariant!r} vanishes at {q.tolist()}")
        mu = abs(ref / jet.value) ** (1.0 / l)
        dmu = -mu / l * np.array(jet.coeffs[1 : 1 + g.dim]) / jet.value
        grad = np.linalg.solve(g.matrix(q), dmu)
        rate = math.sqrt(abs(float(dmu @ grad)))  # |dmu/ds| along the unit gradient
        return mu, -grad / rate, rate

    m0, _, rate0 = field(p)
    cap = 10.0 * m0 / rate0 if budget is None else budget
    s = 0.0
    while True:
        m, k1, rate = field(p)
        hn = min(h, 0.1 * m / rate)
        if m <= mu_stop * m0 or not _safe(g, p + hn * k1):
            return ProbeResult("finite", s + m / rate, m, cap)
        if s > cap:
            return ProbeResult("exceeded_budget", cap, m, cap)
        k2 = field(p + 0.5 * hn * k1)[1]
        k3 = field(p + 0.5 * hn * k2)[1]
        k4 = field(p + hn * k3)[1]
        p = p + hn / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        s += hn


def _geodesic_blowup(g: MetricField, p, direction, h: float, cap: float, rel: float = 1e-6) -> ProbeResult:
    st = GeodesicState(p, unit_vector(g, p, direction))
    while st.arc_length < cap:
        v = st.velocity
        acc = _geodesic_rhs(g, st.point, v)[1]
        nv = float(np.linalg.norm(v))
        growth = float(v @ acc) / nv
        remaining = nv / growth if growth > 0 else math.inf
        total = st.arc_length + remaining
        if math.isfinite(remaining) and remaining <= rel * total:
            return ProbeResult("finite", total, float("nan"), cap)
        hn = min(h, 0.1 * remaining, cap - st.arc_length + 1e-12)
        try:
            nxt = _step(g, st, hn)
            if not _safe(g, nxt.point):
                raise GeodesicDomainExit("degenerate", nxt.arc_length, nxt)
        except GeodesicDomainExit:
            if not math.isfinite(total):
                return ProbeResult("finite", st.arc_length, float("nan"), cap)
            return ProbeResult("finite", total, float("nan"), cap)
        st = nxt
    return ProbeResult("exceeded_budget", cap, float("nan"), cap)


# ---------------------------------------------------------------------------
# Walker alpha classification


@dataclass(frozen=True)
class AlphaClassification:
    c3: float
    branch1_residual: float
    ratio_mean: float
    ratio_variance: float

    def power_law(self, tol: float = 1e-9) -> bool:
        """``alpha^3 = c3 alpha_x^2`` holds on the samples."""
        return self.branch1_residual <= tol

    def ratio_constant(self, tol: float = 1e-9) -> bool:
        return self.ratio_variance <= tol


def _alpha_derivs(alpha: Callable, x: float, n: int = 2) -> list[float]:
    jet = J.as_jet(alpha(Jet.variable(0, float(x), 1, n)), 1, n)
    return [jet.derivative((j,)) for j in range(n + 1)]


def classify_walker_alpha(alpha: Callable, samples) -> AlphaClassification:
    """Residuals of the two Walker branch ODEs for ``alpha`` at ``samples``.

    Branch ``f_yyy = 0``: least-squares ``c3`` for ``alpha^3 = c3 alpha_x^2``
    and the largest residual relative to ``max |alpha^3|``.  Branch
    ``f_yyy != 0``: mean and variance of ``alpha alpha'' / alpha'^2``.
    """
    d = np.array([_alpha_derivs(alpha, x) for x in samples])
    a, a1, a2 = d[:, 0], d[:, 1], d[:, 2]
    if np.any(a1 == 0):
        raise ZeroDivisionError("alpha' vanishes at a sample; the ratio test degenerates")
    lhs, rhs = a**3, a1**2
    c3 = float(lhs @ rhs / (rhs @ rhs))
    res = float(np.max(np.abs(lhs - c3 * rhs)) / np.max(np.abs(lhs)))
    ratio = a * a2 / a1**2
    return AlphaClassification(c3, res, float(np.mean(ratio)), float(np.var(ratio)))


# ---------------------------------------------------------------------------
# Gaussian construction for variable curvature homogeneity


def _adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int = 50) -> float:
    def simpson(fa, fm, fb, a_, b_):
        return (b_ - a_) / 6 * (fa + 4 * fm + fb)

    def rec(a_, b_, fa, fm, fb, whole, eps, depth):
        m = 0.5 * (a_ + b_)
        lm, rm = 0.5 * (a_ + m), 0.5 * (m + b_)
        flm, frm = f(lm), f(rm)
        left, right = simpson(fa, flm, fm, a_, m), simpson(fm, frm, fb, m, b_)
        if abs(left + right - whole) <= 15 * eps:
            return left + right + (left + right - whole) / 15
        if depth <= 0:
            raise QuadratureError(f"adaptive Simpson did not reach tolerance {tol:g} on [{a:g}, {b:g}]")
        return rec(a_, m, fa, flm, fm, left, eps / 2, depth - 1) + rec(m, b_, fm, frm, fb, right, eps / 2, depth - 1)

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


def gaussian_derivative(n: int, x: float) -> float:
    """``d^n/dx^n exp(-x^2) = (-1)^n H_n(x) exp(-x^2)`` (physicists' Hermite)."""
    c = np.zeros(n + 1)
    c[n] = 1.0
    return (-1) ** n * float(hermite.hermval(x, c)) * math.exp(-x * x)


@dataclass(frozen=True)
class VariableCH:
    """``alpha`` with ``alpha^(k) = exp(-x^2)`` and ``alpha^(l) = int_{-inf}^x alpha^(l+1)``.

    ``alpha`` accepts floats or jets (for use inside a Walker metric).
    """

    k: int
    tol: float = 1e-10
    tail: float = 8.0

    def derivative(self, l: int, x: float) -> float:
        """``alpha^(l)(x)`` for any ``l >= 0``."""
        return _alpha_derivative(self.k, l, float(x), self.tol, self.tail)

    def alpha(self, x):
        if isinstance(x, Jet):
            return apply_derivatives(x, [self.derivative(l, x.value) for l in range(x.order + 1)])
        return self.derivative(0, x)

    def frame_scale(self, l: int, x: float) -> float:
        """``a11 = (alpha^(l))^(-1 / (2 + l))``."""
        return self.derivative(l, x) ** (-1.0 / (2 + l))


@lru_cache(maxsize=4096)
def _alpha_derivative(k: int, l: int, x: float, tol: float, tail: float) -> float:
    if l >= k:
        return gaussian_derivative(l - k, x)
    j = k - l  # repeated integral count: Cauchy formula
    fact = math.factorial(j - 1)
    lower = min(x, 0.0) - tail

    def integrand(t):
        return (x - t) ** (j - 1) / fact * math.exp(-t * t)

    return _adaptive_simpson(integrand, lower, x, tol)


def variable_ch_construct(k: int, tol: float = 1e-10) -> VariableCH:
    """Walker profile with ``alpha^(k) = exp(-x^2)``; use as ``f = alpha(x) y^2 / 2``.

    Lower derivatives are repeated integrals from ``-inf``, evaluated by the
    Cauchy formula ``int (x - t)^(j-1) / (j-1)! exp(-t^2) dt`` with adaptive
    Simpson from ``min(x, 0) - 8``; the neglected tail is below ``exp(-64)``
    times a polynomial factor.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    return VariableCH(int(k), tol)


def normalized_component(ch: VariableCH, l: int, point) -> float:
    """Engine value of ``nabla^l R(xi_1, xi_2, xi_2, xi_1; xi_1, ..., xi_1)`` in the scaled frame.

    ``xi_1 = a11 (d_x + f d_xt)``, ``xi_2 = d_y`` with ``a11 = (alpha^(l))^(-1/(2+l))``.
    """
    from .zoo import walker_metric, walker_quad

    x, y = float(point[0]), float(point[1])
    wf = walker_quad(ch.alpha, name=f"gaussian(k={ch.k})")
    g = walker_metric(wf)
    T = curvature_derivatives(g, point, l)[l].entries
    a11 = ch.frame_scale(l, x)
    f = 0.5 * ch.derivative(0, x) * y * y
    xi1 = a11 * np.array([1.0, 0.0, f])
    xi2 = np.array([0.0, 1.0, 0.0])
    vecs = [xi1, xi2, xi2, xi1] + [xi1] * l
    out = T
    for v in vecs:
        out = np.tensordot(v, out, axes=([0], [0]))
    return float(out)


# ---------------------------------------------------------------------------
# homothety characters of upper-triangular groups


@dataclass(frozen=True)
class CharacterSpec:
    n: int
    a: tuple[float, ...]

    def __post_init__(self):
        if len(self.a) != self.n:
            raise ValueError("exponent vector length must equal n")
        if all(x == 0 for x in self.a):
            raise ValueError("exponent vector must be non-zero")


@dataclass(frozen=True)
class CharacterResult:
    lam: float
    split: bool


def character_eval(spec: CharacterSpec, H) -> CharacterResult:
    """``lam(H) = prod h_ii^(a_i)``; the character splits iff ``sum a_i != 0``."""
    H = np.asarray(H, dtype=float)
    if H.shape != (spec.n, spec.n):
        raise ValueError(f"H must be {spec.n}x{spec.n}")
    if np.any(np.tril(H, -1) != 0):
        raise ValueError("H must be upper triangular")
    d = np.diag(H)
    if np.any(d <= 0):
        raise ValueError("diagonal entries must be positive")
    lam = float(np.prod(d ** np.asarray(spec.a, dtype=float)))
    return CharacterResult(lam, sum(spec.a) != 0)
