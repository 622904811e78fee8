"""Pointwise tensor calculus on coordinate-defined pseudo-Riemannian metrics.

Everything is chart-local.  A :class:`MetricField` supplies its component
functions; they are evaluated on coordinate jets, so every derivative used
downstream (Christoffel symbols, curvature, iterated covariant derivatives)
is exact up to rounding.

Index conventions
-----------------
``christoffel[i, j, k] = Gamma_ij^k`` with ``nabla_{d_i} d_j = Gamma_ij^k d_k``.
``riemann_operator[i, j, k, l]`` is the ``d_l`` component of
``R(d_i, d_j) d_k = (nabla_i nabla_j - nabla_j nabla_i) d_k`` and the
curvature tensor is ``R_ijkl = g(R(d_i, d_j) d_k, d_l)``.  Covariant
differentiation appends its slot last, so ``nabla^2 R[i,j,k,l,p,q]`` is
``nabla^2 R(d_i, d_j, d_k, d_l; d_p, d_q)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .jets import MAX_ORDER, Jet, JetOrderError, JetTensor, coordinate_jets, jeinsum, jet_inverse

ENGINE_MAX_ORDER = MAX_ORDER
CO, CONTRA = "co", "contra"
_LETTERS = "abcdefghijklmno"


class DomainError(ValueError):
    """A point lies outside the metric's declared domain."""


class DegenerateMetricError(ValueError):
    """The metric matrix is singular (or has the wrong signature) at a point."""


def _always(_p) -> bool:
    return True


@dataclass(frozen=True)
class MetricField:
    """Metric given by component functions in a single chart.

    ``components(x)`` receives the coordinates as a sequence (floats or
    :class:`~hcg.jets.Jet` objects) and returns an ``m x m`` nested sequence.
    Use the elementary functions from :mod:`hcg.jets` inside it so the same
    code works on jets.
    """

    dim: int
    signature: tuple[int, int]
    components: Callable[[Sequence], Sequence[Sequence]]
    domain: Callable[[np.ndarray], bool] = _always
    name: str = ""
    coordinates: tuple[str, ...] = ()

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("metric dimension must be at least 2")
        if sum(self.signature) != self.dim:
            raise ValueError("signature (p, q) must satisfy p + q = dim")

    def check_point(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=float)
        if p.shape != (self.dim,) or not np.all(np.isfinite(p)):
            raise DomainError(f"point {point!r} is not a finite {self.dim}-vector")
        if not self.domain(p):
            raise DomainError(f"point {p.tolist()} is outside the domain of {self.name or 'metric'}")
        return p

    def matrix(self, point) -> np.ndarray:
        p = self.check_point(point)
        rows = self.components(list(p))
        return np.array([[float(v) for v in row] for row in rows])


@dataclass(frozen=True)
class TensorAtPoint:
    """Dense tensor components at one point with slot variances."""

    entries: np.ndarray
    variance: tuple[str, ...]

    def __post_init__(self):
        if self.entries.ndim != len(self.variance):
            raise ValueError("variance length must equal tensor rank")

    @property
    def dim(self) -> int:
        return self.entries.shape[0] if self.entries.ndim else 0

    @property
    def rank(self) -> int:
        return self.entries.ndim

    def _contract_slot(self, slot: int, matrix: np.ndarray, new: str) -> "TensorAtPoint":
        moved = np.moveaxis(self.entries, slot, -1) @ matrix
        variance = list(self.variance)
        variance[slot] = new
        return TensorAtPoint(np.moveaxis(moved, -1, slot), tuple(variance))

    def raise_index(self, slot: int, ginv: np.ndarray) -> "TensorAtPoint":
        if self.variance[slot] != CO:
            raise ValueError(f"slot {slot} is not covariant")
        return self._contract_slot(slot, ginv, CONTRA)

    def lower_index(self, slot: int, g: np.ndarray) -> "TensorAtPoint":
        if self.variance[slot] != CONTRA:
            raise ValueError(f"slot {slot} is not contravariant")
        return self._contract_slot(slot, g, CO)


@dataclass(frozen=True)
class TensorField:
    """Jet-valued tensor near a point: the engine's currency for iterated nabla."""

    jets: JetTensor
    variance: tuple[str, ...]

    @property
    def order(self) -> int:
        return self.jets.order

    def at_point(self) -> TensorAtPoint:
        return TensorAtPoint(self.jets.value, self.variance)


def jet_of_metric(g: MetricField, point, order: int) -> JetTensor:
    """Metric components as an ``m x m`` grid of jets of the given order at ``point``."""
    if order < 0 or order > ENGINE_MAX_ORDER:
        raise JetOrderError(f"requested order {order} above engine maximum {ENGINE_MAX_ORDER}")
    p = g.check_point(point)
    rows = g.components(coordinate_jets(p, order))
    jt = JetTensor.from_jets(rows, g.dim, order)
    if jt.shape != (g.dim, g.dim):
        raise ValueError(f"metric components have shape {jt.shape}, expected {(g.dim, g.dim)}")
    if not np.allclose(jt.data, np.swapaxes(jt.data, 0, 1), rtol=0, atol=1e-14 * (1 + np.abs(jt.data).max())):
        raise ValueError("metric component grid is not symmetric")
    return jt


def _check_nondegenerate(g: MetricField, g0: np.ndarray, point):
    eig = np.linalg.eigvalsh(g0)
    scale = max(1.0, np.abs(eig).max())
    if np.abs(eig).min() <= 1e-12 * scale:
        raise DegenerateMetricError(f"metric is singular at {np.asarray(point).tolist()}")
    neg = int(np.sum(eig < 0))
    if (neg, g.dim - neg) != tuple(g.signature):
        raise DegenerateMetricError(
            f"metric has signature {(neg, g.dim - neg)} at {np.asarray(point).tolist()}, "
            f"declared {tuple(g.signature)}"
        )


class LocalGeometry:
    """Jets of the metric and its Levi-Civita data at one point.

    ``order`` is the metric jet order.  Christoffel symbols carry order
    ``order - 1``, curvature ``order - 2`` and each further covariant
    derivative one less.
    """

    def __init__(self, g: MetricField, point, order: int = 6):
        self.g = g
        self.point = g.check_point(point)
        self.order = order
        self.metric = jet_of_metric(g, self.point, order)
        _check_nondegenerate(g, self.metric.value, self.point)

    @property
    def dim(self) -> int:
        return self.g.dim

    @cached_property
    def inverse(self) -> JetTensor:
        return jet_inverse(self.metric)

    @cached_property
    def christoffel(self) -> JetTensor:
        if self.order < 1:
            raise JetOrderError("Christoffel symbols need metric jets of order >= 1")
        dg = self.metric.grad()  # dg[i, j, l] = d_l g_ij
        comb = dg.transpose((2, 0, 1)) + dg.transpose((0, 2, 1)) - dg
        # comb[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
        return jeinsum("kl,ijl->ijk", self.inverse, comb).scale(0.5)

    @cached_property
    def riemann_operator(self) -> JetTensor:
        gam = self.christoffel
        dgam = gam.grad()  # dgam[j, k, l, i] = d_i Gamma_jk^l
        term = dgam.transpose((3, 0, 1, 2)) - dgam.transpose((0, 3, 1, 2))
        quad = jeinsum("jkp,ipl->ijkl", gam, gam)
        return term + quad - quad.transpose((1, 0, 2, 3))

    @cached_property
    def riemann(self) -> JetTensor:
        return jeinsum("ijkp,pl->ijkl", self.riemann_operator, self.metric)

    def nabla(self, field_: TensorField) -> TensorField:
        """Covariant derivative; the new slot is appended last."""
        T = field_.jets
        if T.order < 1:
            raise JetOrderError("insufficient jet order remaining for covariant derivative")
        n = len(field_.variance)
        idx = _LETTERS[:n]
        out = T.grad()
        gam = self.christoffel
        for s, var in enumerate(field_.variance):
            swapped = idx[:s] + "q" + idx[s + 1 :]
            if var == CO:
                term = jeinsum(f"p{idx[s]}q,{swapped}->{idx}p", gam, T)
                out = out - term
            else:
                term = jeinsum(f"pq{idx[s]},{swapped}->{idx}p", gam, T)
                out = out + term
        return TensorField(out, field_.variance + (CO,))

    def curvature_fields(self, levels: int) -> list[TensorField]:
        """``[R, nabla R, ..., nabla^levels R]`` as jet fields (all slots covariant)."""
        if self.order - 2 - levels < 0:
            raise JetOrderError(
                f"nabla^{levels} R needs metric jets of order {levels + 2}, have {self.order}"
            )
        out = [TensorField(self.riemann, (CO,) * 4)]
        for _ in range(levels):
            out.append(self.nabla(out[-1]))
        return out


# ---------------------------------------------------------------------------
# public pointwise operations


def christoffel(g: MetricField, point) -> TensorAtPoint:
    geo = LocalGeometry(g, point, order=1)
    return TensorAtPoint(geo.christoffel.value, (CO, CO, CONTRA))


def curvature(g: MetricField, point) -> tuple[TensorAtPoint, TensorAtPoint]:
    """Curvature tensor ``R`` (0,4) and curvature operator (1,3) at ``point``."""
    geo = LocalGeometry(g, point, order=2)
    R = TensorAtPoint(geo.riemann.value, (CO,) * 4)
    op = TensorAtPoint(geo.riemann_operator.value, (CO, CO, CO, CONTRA))
    return R, op


def covariant_derivative(field_: TensorField, g: MetricField, point) -> TensorField:
    geo = LocalGeometry(g, point, order=field_.order)
    return geo.nabla(field_)


def curvature_derivatives(g: MetricField, point, k: int) -> list[TensorAtPoint]:
    """``[R, nabla R, ..., nabla^k R]`` at ``point``."""
    geo = LocalGeometry(g, point, order=k + 2)
    return [f.at_point() for f in geo.curvature_fields(k)]


def ricci(g: MetricField, point) -> TensorAtPoint:
    """Ricci tensor ``rho_jk = g^il R_ijkl``."""
    geo = LocalGeometry(g, point, order=2)
    rho = np.einsum("il,ijkl->jk", geo.inverse.value, geo.riemann.value)
    return TensorAtPoint(rho, (CO, CO))


def scalar_curvature(g: MetricField, point) -> float:
    geo = LocalGeometry(g, point, order=2)
    return float(np.einsum("il,jk,ijkl->", geo.inverse.value, geo.inverse.value, geo.riemann.value))


# ---------------------------------------------------------------------------
# Weyl scalar invariants

WEYL_ORDERS = {
    "tau": 2,
    "norm_R": 4,
    "norm_rho": 4,
    "tau_sq": 4,
    "laplace_tau": 4,
    "norm_nabla_R": 6,
    "norm_grad_tau": 6,
    "tr_rho3": 6,
}
# number of covariant derivatives of R each invariant contracts
_WEYL_LEVEL = {
    "tau": 0,
    "norm_R": 0,
    "norm_rho": 0,
    "tau_sq": 0,
    "laplace_tau": 2,
    "norm_nabla_R": 1,
    "norm_grad_tau": 1,
    "tr_rho3": 0,
}


@dataclass(frozen=True)
class WeylScalarSet:
    values: dict[str, float]
    orders: dict[str, int] = field(default_factory=lambda: dict(WEYL_ORDERS))

    def __getitem__(self, name: str) -> float:
        return self.values[name]

    def max_abs(self) -> float:
        return max(abs(v) for v in self.values.values())


def _invariant_jets(ginv: JetTensor, fields: list[JetTensor], names) -> dict[str, Jet]:
    """Full contractions; inputs may carry jets of any order (results are scalar jets)."""
    R = fields[0]
    out = {}
    need_rho = any(n in names for n in ("tau", "tau_sq", "norm_rho", "tr_rho3"))
    if need_rho:
        rho = jeinsum("il,ijkl->jk", ginv, R)
        rho_mixed = jeinsum("ja,ka->jk", rho, ginv)  # rho_j^k
        tau = jeinsum("jj->", rho_mixed)
    if "tau" in names:
        out["tau"] = tau
    if "tau_sq" in names:
        out["tau_sq"] = jeinsum(",->", tau, tau)
    if "norm_rho" in names:
        out["norm_rho"] = jeinsum("jk,kj->", rho_mixed, rho_mixed)
    if "tr_rho3" in names:
        sq = jeinsum("jk,kl->jl", rho_mixed, rho_mixed)
        out["tr_rho3"] = jeinsum("jl,lj->", sq, rho_mixed)
    if "norm_R" in names:
        up = R
        for s in range(4):
            idx = "abcd"
            swapped = idx[:s] + "q" + idx[s + 1 :]
            up = jeinsum(f"{swapped},q{idx[s]}->{idx}", up, ginv)
        out["norm_R"] = jeinsum("abcd,abcd->", up, R)
    if "laplace_tau" in names:
        D2 = fields[2]
        t = jeinsum("ia,ijbakc->jbkc", ginv, D2)
        t = jeinsum("jb,jbkc->kc", ginv, t)
        out["laplace_tau"] = -jeinsum("kc,kc->", ginv, t)
    if "norm_nabla_R" in names or "norm_grad_tau" in names:
        D1 = fields[1]
        if "norm_nabla_R" in names:
            up = D1
            for s in range(5):
                idx = "abcde"
                swapped = idx[:s] + "q" + idx[s + 1 :]
                up = jeinsum(f"{swapped},q{idx[s]}->{idx}", up, ginv)
            out["norm_nabla_R"] = jeinsum("abcde,abcde->", up, D1)
        if "norm_grad_tau" in names:
            t = jeinsum("il,ijblk->jbk", ginv, D1)
            dtau = jeinsum("jb,jbk->k", ginv, t)
            out["norm_grad_tau"] = jeinsum("k,kc,c->", dtau, ginv, dtau)
    return {n: Jet(v.alg, v.order, v.data) for n, v in out.items()}


def weyl_scalars(g: MetricField, point) -> WeylScalarSet:
    """The eight catalogue invariants at ``point`` (metric jets of order 6)."""
    geo = LocalGeometry(g, point, order=6)
    fields = [f.jets.truncate(0) for f in geo.curvature_fields(2)]
    jets = _invariant_jets(geo.inverse.truncate(0), fields, tuple(WEYL_ORDERS))
    return WeylScalarSet({n: jets[n].value for n in WEYL_ORDERS})


def invariant_jet(g: MetricField, point, name: str, order: int = 1) -> Jet:
    """Catalogue invariant ``name`` as a jet of the given order at ``point``."""
    if name not in WEYL_ORDERS:
        raise KeyError(f"unknown invariant {name!r}; known: {sorted(WEYL_ORDERS)}")
    level = _WEYL_LEVEL[name]
    geo = LocalGeometry(g, point, order=order + 2 + level)
    fields = [f.jets.truncate(order) for f in geo.curvature_fields(level)]
    return _invariant_jets(geo.inverse.truncate(order), fields, (name,))[name]


# ---------------------------------------------------------------------------
# maps


def map_jacobian(T: Callable[[Sequence], Sequence], point) -> tuple[np.ndarray, np.ndarray]:
    """Image and Jacobian ``J[a, i] = dT^a/dx^i`` via first-order jets."""
    p = np.asarray(point, dtype=float)
    xs = coordinate_jets(p, 1)
    image = T(xs)
    m = len(p)
    val = np.empty(len(image))
    J = np.zeros((len(image), m))
    for a, comp in enumerate(image):
        if isinstance(comp, Jet):
            val[a] = comp.value
            J[a] = comp.coeffs[1 : 1 + m]
        else:
            val[a] = float(comp)
    return val, J


def pullback_metric(g: MetricField, T: Callable, point, jacobian: Callable | None = None) -> np.ndarray:
    """Components of ``T^* g`` at ``point`` in the source chart."""
    p = np.asarray(point, dtype=float)
    if jacobian is None:
        image, J = map_jacobian(T, p)
    else:
        image = np.array([float(v) for v in T(list(p))])
        J = np.asarray(jacobian(p), dtype=float)
    G = g.matrix(image)
    return J.T @ G @ J


def homothety_pullback_residual(
    g: MetricField,
    T: Callable,
    lam: float,
    samples,
    jacobian: Callable | None = None,
    target: MetricField | None = None,
) -> float:
    """Max over samples and entries of ``|(T^* g)_ij - lam^2 h_ij|``.

    ``h`` is ``target`` when given (for maps between two metrics), else ``g``.
    A result at rounding level certifies ``T^* g = lam^2 g`` on the samples.
    """
    if lam <= 0:
        raise ValueError("homothety constant must be positive")
    h = g if target is None else target
    worst = 0.0
    for p in samples:
        pb = pullback_metric(g, T, p, jacobian)
        worst = max(worst, float(np.max(np.abs(pb - lam**2 * h.matrix(p)))))
    return worst
