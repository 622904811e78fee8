"""Metric families with closed-form curvature oracles and explicit maps.

Walker metrics use coordinates ``(x, y, xt)`` with

    g(d_x, d_x) = -2 f(x, y),  g(d_x, d_xt) = g(d_y, d_y) = 1.

Warped / Q-structure metrics use ``(x, y_1, ..., y_{m-1})`` with

    g = e^{t x} (dx^2 + dx o theta + g_N),

where ``dx o theta`` contributes ``theta_i`` to ``g(d_x, d_{y_i})``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import jets as J
from .jets import Jet, apply_derivatives
from .tensors import (
    CO,
    DegenerateMetricError,
    LocalGeometry,
    MetricField,
    TensorAtPoint,
    TensorField,
    homothety_pullback_residual,
    ricci,
    scalar_curvature,
)

WALKER_COORDS = ("x", "y", "xt")


class ZooError(ValueError):
    code = "zoo"


class FlatDirectionError(ZooError):
    code = "f_yy_zero"


class AlphaBranchError(ZooError):
    """f_yyy vanishes: the frame normalization needs the alpha-branch path."""

    code = "f_yyy_zero"


class NonKillingError(ZooError):
    code = "non_killing"


# ---------------------------------------------------------------------------
# Walker family


@dataclass(frozen=True)
class WalkerFun:
    """Defining function ``f(x, y)`` of a Walker metric.

    ``f`` must accept floats or jets (use :mod:`hcg.jets` elementary functions).
    """

    f: Callable
    domain: Callable[[float, float], bool] = lambda x, y: True
    name: str = "walker"

    def __call__(self, x, y):
        return self.f(x, y)

    def partials(self, x: float, y: float, order: int = 4) -> Jet:
        """Two-variable jet of ``f`` at ``(x, y)``; ``.derivative((i, j))`` gives ``f_{x^i y^j}``."""
        xs = J.coordinate_jets([x, y], order)
        val = self.f(xs[0], xs[1])
        return J.as_jet(val, 2, order)


def walker_metric(wf: WalkerFun) -> MetricField:
    def components(c):
        f = wf.f(c[0], c[1])
        return [[-2 * f, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]

    return MetricField(
        dim=3,
        signature=(1, 2),
        components=components,
        domain=lambda p: bool(wf.domain(p[0], p[1])),
        name=wf.name,
        coordinates=WALKER_COORDS,
    )


def walker_exp(a: float = 1.0, sign: float = 1.0) -> WalkerFun:
    return WalkerFun(lambda x, y: sign * J.exp(a * y), name=f"walker.exp(a={a:g},sign={sign:g})")


def walker_log(sign: float = 1.0) -> WalkerFun:
    return WalkerFun(lambda x, y: sign * J.log(y), domain=lambda x, y: y > 0, name=f"walker.log(sign={sign:g})")


def walker_pow(eps: float = 3.0, sign: float = 1.0) -> WalkerFun:
    if eps in (0.0, 1.0, 2.0):
        raise ZooError("power exponent must differ from 0, 1, 2")
    return WalkerFun(
        lambda x, y: sign * y**eps, domain=lambda x, y: y > 0, name=f"walker.pow(eps={eps:g},sign={sign:g})"
    )


def walker_quad(alpha: Callable, domain: Callable[[float], bool] = lambda x: True, name: str = "") -> WalkerFun:
    """``f = alpha(x) y^2 / 2``; ``alpha`` must accept floats and jets."""
    return WalkerFun(
        lambda x, y: 0.5 * alpha(x) * y * y,
        domain=lambda x, y: bool(domain(x)),
        name=name or "walker.quad",
    )


def walker_sym(a: float = 1.0) -> WalkerFun:
    """``f = a y^2``: constant ``f_yy``, a symmetric space."""
    return WalkerFun(lambda x, y: a * y * y, name=f"walker.sym(a={a:g})")


def walker_quartic() -> WalkerFun:
    return WalkerFun(lambda x, y: y**4 / 12.0, name="walker.quartic")


def alpha_exp(x):
    return J.exp(x)


def alpha_inverse_square(a: float = 1.0, x0: float = 0.0):
    return lambda x: a * (x - x0) ** -2


def walker_curvature_oracle(wf: WalkerFun, point) -> dict[str, float]:
    """Closed-form non-zero curvature components from derivatives of ``f`` only."""
    x, y = float(point[0]), float(point[1])
    d = wf.partials(x, y, 4).derivative
    return {
        "R": d((0, 2)),
        "dR_x": d((1, 2)),
        "dR_y": d((0, 3)),
        "d2R_xx": d((2, 2)) - d((0, 1)) * d((0, 3)),
        "d2R_xy": d((1, 3)),
        "d2R_yx": d((1, 3)),
        "d2R_yy": d((0, 4)),
    }


def _walker_block(value) -> np.ndarray:
    """Rank-4 array with the symmetries of R and R(d_x, d_y, d_y, d_x) = value."""
    value = np.asarray(value, dtype=float)
    out = np.zeros((3, 3, 3, 3) + value.shape)
    out[0, 1, 1, 0] = value
    out[1, 0, 0, 1] = value
    out[0, 1, 0, 1] = -value
    out[1, 0, 1, 0] = -value
    return out


def walker_oracle_tensors(wf: WalkerFun, point) -> list[np.ndarray]:
    """``[R, nabla R, nabla^2 R]`` in coordinates ``(x, y, xt)`` from the oracle."""
    o = walker_curvature_oracle(wf, point)
    R = _walker_block(o["R"])
    dR = np.zeros(3)
    dR[0], dR[1] = o["dR_x"], o["dR_y"]
    d2R = np.zeros((3, 3))
    d2R[0, 0], d2R[0, 1], d2R[1, 0], d2R[1, 1] = o["d2R_xx"], o["d2R_xy"], o["d2R_yx"], o["d2R_yy"]
    return [R, _walker_block(dR), _walker_block(d2R)]


@dataclass(frozen=True)
class WalkerFrame:
    """Null frame ``xi_1, xi_2, xi_3`` with ``<xi_1, xi_3> = <xi_2, xi_2> = 1``.

    ``sign`` is the sign of ``f_yy``; the normalized level values are
    ``sign * (lam^2, 0, lam^3)``.
    """

    a11: float
    a12: float
    a13: float
    a23: float
    a33: float
    lam: float
    f: float
    sign: float = 1.0

    @property
    def matrix(self) -> np.ndarray:
        """Columns are the frame vectors in coordinates ``(x, y, xt)``."""
        return np.array(
            [
                [self.a11, 0.0, 0.0],
                [self.a11 * self.a12, 1.0, 0.0],
                [self.a11 * (self.f + self.a13), self.a23, self.a33],
            ]
        )

    def relations(self) -> tuple[float, float, float]:
        """``(a12^2 + 2 a13, a12 + a23, a11 a33 - 1)``; all zero for a valid frame."""
        return (self.a12**2 + 2 * self.a13, self.a12 + self.a23, self.a11 * self.a33 - 1.0)


WALKER_NULL_GRAM = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])


def _frame_from(a11: float, a12: float, lam: float, f: float, sign: float) -> WalkerFrame:
    a13 = -0.5 * a12**2
    return WalkerFrame(a11=a11, a12=a12, a13=a13, a23=-a12, a33=1.0 / a11, lam=lam, f=f, sign=sign)


def walker_frame(wf: WalkerFun, point) -> WalkerFrame:
    """Normalizing frame for ``f_yyy != 0``: level-0 value ``lam^2``, ``xi_1`` slot 0, ``xi_2`` slot ``lam^3``."""
    x, y = float(point[0]), float(point[1])
    jet = wf.partials(x, y, 3)
    f_yy, f_yyy, f_xyy = jet.derivative((0, 2)), jet.derivative((0, 3)), jet.derivative((1, 2))
    if f_yy == 0.0:
        raise FlatDirectionError(f"f_yy vanishes at {(x, y)}")
    if f_yyy == 0.0:
        raise AlphaBranchError(f"f_yyy vanishes at {(x, y)}; use walker_alpha_frame")
    lam = f_yyy / f_yy
    a12 = -f_xyy / f_yyy
    a11 = abs(lam) / math.sqrt(abs(f_yy))
    return _frame_from(a11, a12, lam, jet.value, math.copysign(1.0, f_yy))


def walker_alpha_frame(wf: WalkerFun, point, c0: float = 1.0) -> tuple[WalkerFrame, float]:
    """Frame for the ``f_yyy = 0`` branch, ``f_yy = alpha(x)``.

    Solves ``a11^2 alpha = lam^2 c0`` with the homothety freedom fixed by
    ``lam = 1``; returns the frame and ``c1 = a11^3 alpha_x`` so that
    ``nabla R(xi_1, xi_2, xi_2, xi_1; xi_1) = lam^3 c1``.  ``c1`` is constant
    along M exactly when ``alpha^3 = c3 alpha_x^2``.
    """
    x, y = float(point[0]), float(point[1])
    jet = wf.partials(x, y, 3)
    alpha, alpha_x = jet.derivative((0, 2)), jet.derivative((1, 2))
    if alpha == 0.0:
        raise FlatDirectionError(f"f_yy vanishes at {(x, y)}")
    if abs(jet.derivative((0, 3))) > 1e-12 * max(1.0, abs(alpha)):
        raise ZooError("walker_alpha_frame requires f_yyy = 0")
    if alpha / c0 <= 0:
        raise ZooError("c0 must have the sign of f_yy")
    a11 = math.sqrt(c0 / alpha)
    frame = _frame_from(a11, 0.0, 1.0, jet.value, math.copysign(1.0, alpha))
    return frame, a11**3 * alpha_x


def homothety_invariant_c(wf: WalkerFun, point) -> float:
    """``c_122122 = f_yy f_yyyy / f_yyy^2``."""
    jet = wf.partials(float(point[0]), float(point[1]), 4)
    f_yyy = jet.derivative((0, 3))
    if f_yyy == 0.0:
        raise ZeroDivisionError("c_122122 undefined where f_yyy = 0")
    return jet.derivative((0, 2)) * jet.derivative((0, 4)) / f_yyy**2


# ---------------------------------------------------------------------------
# explicit maps (Walker)


def case_i_isometry(a: float, y0: float, x0: float = 0.0, xt0: float = 0.0, sign: float = 1.0):
    """Isometry of ``M_{e^{a y}}`` moving ``y`` to ``y + y0``."""
    s, h = sign * math.exp(-a * y0 / 2), sign * math.exp(a * y0 / 2)
    return lambda c: [s * c[0] + x0, c[1] + y0, h * c[2] + xt0]


def case_iia_homothety(lam: float, x0: float = 0.0, xt0: float = 0.0):
    """Homothety of ``M_{ln y}`` with constant ``lam``."""
    L = lam * math.log(lam)
    return lambda c: [lam * c[0] + x0, lam * c[1], lam * c[2] + xt0 + L * c[0]]


def case_iib_homothety(c_exp: float, lam: float, x0: float = 0.0, xt0: float = 0.0):
    """Homothety of ``M_{y^c}`` with constant ``lam``."""
    sx = lam ** ((2 - c_exp) / 2)
    sxt = lam ** (2 + (c_exp - 2) / 2)
    return lambda c: [sx * c[0] + x0, lam * c[1], sxt * c[2] + xt0]


def shear_map(w: Callable):
    """``(x, y, xt) -> (x, y, xt + 2 w(x))``; ``w`` must accept jets."""
    return lambda c: [c[0], c[1], c[2] + 2 * w(c[0])]


def _derivative_function(fun: Callable, n: int) -> Callable:
    """``u -> fun^{(n)}(u)`` for floats or jets, via a univariate jet of ``fun``."""

    def wrapped(u):
        order = u.order if isinstance(u, Jet) else 0
        x0 = float(u)
        jet = J.as_jet(fun(Jet.variable(0, x0, 1, n + order)), 1, n + order)
        derivs = [jet.derivative((n + j,)) for j in range(order + 1)]
        return apply_derivatives(u, derivs)

    return wrapped


@dataclass(frozen=True)
class ChangeOfVariables:
    residual: float
    f_yy_residual: float
    f_tilde: WalkerFun


def change_of_variables_check(wf: WalkerFun, beta: Callable, samples) -> ChangeOfVariables:
    """Pull ``g_f`` back along ``T(x, y, xt) = (x, y - beta(x), xt + y beta'(x))``.

    Compares with ``g_{f~}``, ``f~(x, y) = f(x, y - beta) - (beta'^2 + 2 y beta'') / 2``.
    """
    b1, b2 = _derivative_function(beta, 1), _derivative_function(beta, 2)

    def T(c):
        return [c[0], c[1] - beta(c[0]), c[2] + c[1] * b1(c[0])]

    def f_tilde(x, y):
        return wf.f(x, y - beta(x)) - 0.5 * (b1(x) * b1(x) + 2 * y * b2(x))

    wt = WalkerFun(f_tilde, domain=lambda x, y: wf.domain(x, y - float(beta(float(x)))), name=f"{wf.name}~")
    g_f, g_ft = walker_metric(wf), walker_metric(wt)
    residual = homothety_pullback_residual(g_f, T, 1.0, samples, target=g_ft)
    fyy = 0.0
    for p in samples:
        lhs = wt.partials(p[0], p[1], 2).derivative((0, 2))
        rhs = wf.partials(p[0], p[1] - float(beta(float(p[0]))), 2).derivative((0, 2))
        fyy = max(fyy, abs(lhs - rhs))
    return ChangeOfVariables(residual, fyy, wt)


# ---------------------------------------------------------------------------
# warped products and Q-structures


def sphere_stereographic() -> MetricField:
    """Unit round S^2 in stereographic coordinates ``(u, v)``."""

    def components(c):
        s = 4 / (1 + c[0] * c[0] + c[1] * c[1]) ** 2
        return [[s, 0.0], [0.0, s]]

    return MetricField(
        2, (0, 2), components, domain=lambda p: p[0] ** 2 + p[1] ** 2 < 100.0, name="S2", coordinates=("u", "v")
    )


def flat_plane() -> MetricField:
    return MetricField(2, (0, 2), lambda c: [[1.0, 0.0], [0.0, 1.0]], name="R2", coordinates=("u", "v"))


def euclidean(m: int) -> MetricField:
    eye = np.eye(m)
    return MetricField(m, (0, m), lambda c: eye.tolist(), name=f"E{m}")


def minkowski(m: int) -> MetricField:
    eta = np.diag([-1.0] + [1.0] * (m - 1))
    return MetricField(m, (1, m - 1), lambda c: eta.tolist(), name=f"Mink{m}")


@dataclass(frozen=True)
class QStructureSpec:
    """Base ``(N, g_N)``, warping rate ``t`` and a 1-form ``theta`` on N.

    ``theta(y)`` returns the ``m-1`` components (floats or jets).
    """

    base: MetricField
    t: float = 1.0
    theta: Callable | None = None
    name: str = ""

    def theta_at(self, y) -> np.ndarray:
        if self.theta is None:
            return np.zeros(self.base.dim)
        return np.array([float(v) for v in self.theta(list(y))])

    def theta_norm(self, y) -> float:
        """``g_N(theta, theta)`` at ``y``."""
        th = self.theta_at(y)
        return float(th @ np.linalg.solve(self.base.matrix(y), th))


def q_structure_metric(spec: QStructureSpec, reference=None) -> MetricField:
    """``e^{t x}(dx^2 + dx o theta + g_N)`` on ``R x N``.

    The signature is read off at ``reference`` (default: origin of the base
    chart); degenerate points, where ``g_N(theta, theta) = 1``, are rejected
    by the domain check with that criterion in the message.
    """
    base, t = spec.base, spec.t
    n = base.dim
    m = n + 1

    def components(c):
        x, y = c[0], list(c[1:])
        w = J.exp(t * x)
        gN = base.components(y)
        th = spec.theta(y) if spec.theta is not None else [0.0] * n
        rows = [[w] + [w * th[i] for i in range(n)]]
        for i in range(n):
            rows.append([w * th[i]] + [w * gN[i][j] for j in range(n)])
        return rows

    def domain(p):
        y = p[1:]
        if not base.domain(np.asarray(y)):
            return False
        if spec.theta is not None and abs(spec.theta_norm(y) - 1.0) < 1e-12:
            raise DegenerateMetricError(
                f"g_N(theta, theta) = 1 at {list(map(float, y))}: the metric e^(tx)(dx^2 + dx o theta + g_N) is degenerate"
            )
        return True

    y_ref = np.zeros(n) if reference is None else np.asarray(reference, dtype=float)
    nrm = spec.theta_norm(y_ref) if spec.theta is not None else 0.0
    if abs(nrm - 1.0) < 1e-12:
        raise DegenerateMetricError("g_N(theta, theta) = 1: the metric is degenerate")
    bp, bq = base.signature
    # the (x, theta-direction) block has determinant 1 - |theta|^2 times the base sign
    signature = (bp, bq + 1) if nrm < 1.0 else (bp + 1, bq)
    coords = ("x",) + (base.coordinates or tuple(f"y{i + 1}" for i in range(n)))
    return MetricField(m, signature, components, domain=domain, name=spec.name or f"Q({base.name},t={t:g})", coordinates=coords)


def q_structure_determinant(spec: QStructureSpec, point) -> float:
    g = q_structure_metric(spec, reference=point[1:])
    return float(np.linalg.det(g.matrix(point)))


def warped_sphere(t: float = 1.0) -> MetricField:
    return q_structure_metric(QStructureSpec(sphere_stereographic(), t, name=f"warped.sphere(t={t:g})"))


def warped_flat(t: float = 1.0) -> MetricField:
    return q_structure_metric(QStructureSpec(flat_plane(), t, name=f"warped.flat(t={t:g})"))


def qstruct_flat_theta(t: float = 1.0, theta_u: float = 0.6, theta_v: float = 0.0) -> QStructureSpec:
    return QStructureSpec(
        flat_plane(), t, theta=lambda y: [theta_u, theta_v], name=f"qstruct.flat_theta(t={t:g},theta=({theta_u:g},{theta_v:g}))"
    )


def warped_translation(a: float):
    """``(x, y) -> (x + a, y)``: a homothety of any warped metric with ``lam = e^{t a / 2}``."""
    return lambda c: [c[0] + a] + list(c[1:])


def warped_ricci_oracle(spec: QStructureSpec, point) -> tuple[TensorAtPoint, float]:
    """Ricci tensor and scalar curvature of the warped metric from base data.

    ``rho~ = rho_N - (m-2)/4 t^2 g_N`` on the base block (zero on ``d_x``) and
    ``tau~ = e^{-t x} (tau_N - (m-1)(m-2)/4 t^2)``.
    """
    if spec.theta is not None and np.any(spec.theta_at(point[1:]) != 0):
        raise ZooError("warped_ricci_oracle supports theta = 0 only")
    x, y = float(point[0]), list(point[1:])
    m = spec.base.dim + 1
    t = spec.t
    rho_N = ricci(spec.base, y).entries
    tau_N = scalar_curvature(spec.base, y)
    rho = np.zeros((m, m))
    rho[1:, 1:] = rho_N - (m - 2) / 4 * t**2 * spec.base.matrix(y)
    tau = math.exp(-t * x) * (tau_N - (m - 1) * (m - 2) / 4 * t**2)
    return TensorAtPoint(rho, (CO, CO)), tau


@dataclass(frozen=True)
class FlattenResult:
    rho: float
    s: float
    t_tilde: float
    killing_residual: float
    residual: float


def theta_flatten_check(spec: QStructureSpec, samples, killing_tol: float = 1e-9) -> FlattenResult:
    """Verify the isometry ``M_{t,Q} ~ M_{s,Q~}`` (theta~ = 0) for a translation Killing field.

    The dual field ``xi`` of ``theta`` must be constant in the base chart
    (flow ``y -> y + eps xi``).  The composite map
    ``(x, y) -> (x / rho, y + x xi)`` pulls ``g_{s, 0}`` back to ``g_{t, theta}``
    with ``rho = (1 - |xi|^2)^{-1/2}`` and ``s = rho t``.
    """
    base = spec.base
    n = base.dim
    samples = [np.asarray(p, dtype=float) for p in samples]
    if spec.theta is None:
        xi = np.zeros(n)
        kill = 0.0
    else:
        kill = 0.0
        xis = []
        for p in samples:
            y = p[1:]
            geo = LocalGeometry(base, y, order=1)
            th = J.JetTensor.from_jets(spec.theta(J.coordinate_jets(y, 1)), n, 1)
            d = geo.nabla(TensorField(th, (CO,))).at_point().entries
            kill = max(kill, float(np.max(np.abs(d + d.T))))
            xis.append(np.linalg.solve(base.matrix(y), spec.theta_at(y)))
        if kill > killing_tol:
            raise NonKillingError(f"theta is not Killing: max |theta_(a;b) + theta_(b;a)| = {kill:.3e}")
        xi = xis[0]
        if any(np.max(np.abs(v - xi)) > 1e-12 for v in xis):
            raise NonKillingError("only constant (translation) dual fields are supported")
        for p in samples:
            y = p[1:]
            if np.max(np.abs(base.matrix(y + xi) - base.matrix(y))) > 1e-12:
                raise NonKillingError("translation along xi is not an isometry of the base chart")
    xi_sq = float(xi @ base.matrix(samples[0][1:] if samples else np.zeros(n)) @ xi)
    if xi_sq >= 1.0:
        raise ZooError(f"|xi|^2 = {xi_sq:g} >= 1: not a Riemannian Q-structure")
    rho = (1.0 - xi_sq) ** -0.5
    s = rho * spec.t
    t_tilde = (1.0 + rho**2 * xi_sq) ** -0.5 * s

    g_t = q_structure_metric(spec)
    g_s = q_structure_metric(QStructureSpec(base, s, None))

    def F(c):
        return [c[0] / rho] + [c[1 + i] + c[0] * xi[i] for i in range(n)]

    residual = homothety_pullback_residual(g_s, F, 1.0, samples, target=g_t)
    return FlattenResult(rho=rho, s=s, t_tilde=t_tilde, killing_residual=kill, residual=residual)


# ---------------------------------------------------------------------------
# name registry


@dataclass(frozen=True)
class ZooEntry:
    builder: Callable[..., MetricField]
    params: dict = field(default_factory=dict)
    coordinates: tuple[str, ...] = WALKER_COORDS
    walker: Callable[..., WalkerFun] | None = None


def _quad_fun(alpha: str = "exp", a: float = 1.0, x0: float = 0.0, k: int = 2) -> WalkerFun:
    if alpha == "exp":
        return walker_quad(alpha_exp, name="walker.quad(alpha=exp)")
    if alpha == "inverse_square":
        return walker_quad(
            alpha_inverse_square(a, x0), domain=lambda x: x != x0, name=f"walker.quad(alpha={a:g}(x-{x0:g})^-2)"
        )
    if alpha == "gaussian":
        from .lab import variable_ch_construct

        ch = variable_ch_construct(int(k))
        return walker_quad(ch.alpha, name=f"walker.quad(alpha=gaussian,k={int(k)})")
    raise ZooError(f"unknown alpha {alpha!r}; choose exp, inverse_square, gaussian")


ZOO: dict[str, ZooEntry] = {
    "walker.exp": ZooEntry(lambda a=1.0, sign=1.0: walker_metric(walker_exp(a, sign)), {"a": 1.0, "sign": 1.0}, walker=walker_exp),
    "walker.log": ZooEntry(lambda sign=1.0: walker_metric(walker_log(sign)), {"sign": 1.0}, walker=walker_log),
    "walker.pow": ZooEntry(
        lambda eps=3.0, sign=1.0: walker_metric(walker_pow(eps, sign)), {"eps": 3.0, "sign": 1.0}, walker=walker_pow
    ),
    "walker.quad": ZooEntry(
        lambda alpha="exp", a=1.0, x0=0.0, k=2: walker_metric(_quad_fun(alpha, a, x0, k)),
        {"alpha": "exp", "a": 1.0, "x0": 0.0, "k": 2},
        walker=_quad_fun,
    ),
    "walker.sym": ZooEntry(lambda a=1.0: walker_metric(walker_sym(a)), {"a": 1.0}, walker=walker_sym),
    "walker.quartic": ZooEntry(lambda: walker_metric(walker_quartic()), {}, walker=walker_quartic),
    "warped.sphere": ZooEntry(warped_sphere, {"t": 1.0}, ("x", "u", "v")),
    "warped.flat": ZooEntry(warped_flat, {"t": 1.0}, ("x", "u", "v")),
    "qstruct.flat_theta": ZooEntry(
        lambda t=1.0, theta_u=0.6, theta_v=0.0: q_structure_metric(qstruct_flat_theta(t, theta_u, theta_v)),
        {"t": 1.0, "theta_u": 0.6, "theta_v": 0.0},
        ("x", "u", "v"),
    ),
}


def build(name: str, **params) -> MetricField:
    """Zoo metric by registry name; unknown parameters raise ``KeyError``."""
    if name not in ZOO:
        raise KeyError(f"unknown metric {name!r}; available: {', '.join(sorted(ZOO))}")
    entry = ZOO[name]
    unknown = set(params) - set(entry.params)
    if unknown:
        raise KeyError(f"unknown parameter(s) {sorted(unknown)} for {name}; allowed: {sorted(entry.params)}")
    return entry.builder(**params)


def walker_function(name: str, **params) -> WalkerFun:
    entry = ZOO[name]
    if entry.walker is None:
        raise ZooError(f"{name} is not a Walker metric")
    return entry.walker(**params)
