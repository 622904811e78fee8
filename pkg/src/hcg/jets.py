"""Truncated multivariate Taylor arithmetic.

A jet of order ``K`` at a point stores the Taylor coefficients
``f_alpha / alpha!`` for every multi-index ``alpha`` with ``|alpha| <= K``.
Coefficients are kept in graded order (total degree first), so truncating
to a lower order is a prefix slice of the coefficient axis.

Two containers are provided:

* :class:`Jet` -- a scalar jet with operator overloading, used to evaluate
  user supplied component functions (metric entries, maps, ...).
* :class:`JetTensor` -- a dense array of jets sharing one order, used by the
  tensor calculus engine.  Products of jet tensors go through :func:`jeinsum`.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Sequence

import numpy as np

MAX_ORDER = 8


class JetOrderError(ValueError):
    """Requested derivative order exceeds what a jet carries."""


class JetAlgebra:
    """Index tables for jets in ``dim`` variables up to order ``order``."""

    def __init__(self, dim: int, order: int):
        if dim < 1:
            raise ValueError("jet dimension must be positive")
        if order < 0 or order > MAX_ORDER:
            raise JetOrderError(f"jet order {order} outside 0..{MAX_ORDER}")
        self.dim = dim
        self.order = order

        exps = []
        for deg in range(order + 1):
            for combo in itertools.combinations_with_replacement(range(dim), deg):
                e = [0] * dim
                for v in combo:
                    e[v] += 1
                exps.append(tuple(e))
        self.exponents = np.array(exps, dtype=int).reshape(len(exps), dim)
        self.index = {e: n for n, e in enumerate(exps)}
        self.degree = self.exponents.sum(axis=1)
        # sizes[r] = number of coefficients of a jet of order r
        self.sizes = [math.comb(dim + r, r) for r in range(order + 1)]
        self.size = self.sizes[-1]
        self.factorial = np.array(
            [math.prod(math.factorial(a) for a in e) for e in exps], dtype=float
        )

        pa, pb, tgt = [], [], []
        for i, ei in enumerate(exps):
            for j, ej in enumerate(exps):
                if self.degree[i] + self.degree[j] <= order:
                    pa.append(i)
                    pb.append(j)
                    tgt.append(self.index[tuple(a + b for a, b in zip(ei, ej))])
        perm = np.lexsort((np.array(pb), np.array(tgt)))
        self._pa = np.array(pa)[perm]
        self._pb = np.array(pb)[perm]
        tgt = np.array(tgt)[perm]
        self._starts = np.searchsorted(tgt, np.arange(self.size))
        # pairs whose target has degree <= r form a prefix
        self._npairs = [int(np.searchsorted(tgt, s)) for s in self.sizes]

        self._dsrc = []
        self._dfac = []
        for v in range(dim):
            src = np.zeros(self.sizes[order - 1] if order > 0 else 0, dtype=int)
            fac = np.zeros_like(src, dtype=float)
            for n in range(len(src)):
                e = list(exps[n])
                fac[n] = e[v] + 1
                e[v] += 1
                src[n] = self.index[tuple(e)]
            self._dsrc.append(src)
            self._dfac.append(fac)

    def pair_tables(self, r: int):
        npairs = self._npairs[r]
        return self._pa[:npairs], self._pb[:npairs], self._starts[: self.sizes[r]]

    def derivative_tables(self, var: int, r: int):
        """Tables mapping an order ``r`` jet to its ``d/dx_var`` of order ``r-1``."""
        n = self.sizes[r - 1]
        return self._dsrc[var][:n], self._dfac[var][:n]


@lru_cache(maxsize=None)
def algebra(dim: int, order: int = MAX_ORDER) -> JetAlgebra:
    return JetAlgebra(dim, order)


def _mul_coeffs(alg: JetAlgebra, r: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    pa, pb, starts = alg.pair_tables(r)
    return np.add.reduceat(a[..., pa] * b[..., pb], starts, axis=-1)


class Jet:
    """Scalar truncated Taylor expansion at a point.

    Parameters
    ----------
    alg : JetAlgebra
        Shared index tables; must cover ``order``.
    order : int
        Truncation order ``K``.
    coeffs : ndarray
        ``binomial(dim + K, K)`` Taylor coefficients in graded order.
    """

    __slots__ = ("alg", "order", "coeffs")
    __array_priority__ = 100

    def __init__(self, alg: JetAlgebra, order: int, coeffs):
        self.alg = alg
        self.order = order
        self.coeffs = np.asarray(coeffs, dtype=float)

    @classmethod
    def constant(cls, value: float, dim: int, order: int) -> "Jet":
        alg = algebra(dim)
        c = np.zeros(alg.sizes[order])
        c[0] = value
        return cls(alg, order, c)

    @classmethod
    def variable(cls, var: int, value: float, dim: int, order: int) -> "Jet":
        alg = algebra(dim)
        c = np.zeros(alg.sizes[order])
        c[0] = value
        if order >= 1:
            c[1 + var] = 1.0
        return cls(alg, order, c)

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def __float__(self):
        return self.value

    def derivative(self, multi_index: Sequence[int]) -> float:
        """Partial derivative value for ``multi_index`` (one entry per variable)."""
        key = tuple(int(a) for a in multi_index)
        if sum(key) > self.order:
            raise JetOrderError(f"derivative {key} exceeds jet order {self.order}")
        n = self.alg.index[key]
        return float(self.coeffs[n] * self.alg.factorial[n])

    def d(self, var: int) -> "Jet":
        if self.order == 0:
            raise JetOrderError("cannot differentiate an order-0 jet")
        src, fac = self.alg.derivative_tables(var, self.order)
        return Jet(self.alg, self.order - 1, self.coeffs[src] * fac)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise JetOrderError("cannot raise jet order by truncation")
        return Jet(self.alg, order, self.coeffs[: self.alg.sizes[order]])

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.alg.dim != self.alg.dim:
                raise ValueError("jets over different dimensions")
            r = min(self.order, other.order)
            n = self.alg.sizes[r]
            return r, self.coeffs[:n], other.coeffs[:n]
        return None

    def __add__(self, other):
        co = self._coerce(other)
        if co is None:
            c = self.coeffs.copy()
            c[0] += float(other)
            return Jet(self.alg, self.order, c)
        r, a, b = co
        return Jet(self.alg, r, a + b)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.alg, self.order, -self.coeffs)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        co = self._coerce(other)
        if co is None:
            return Jet(self.alg, self.order, self.coeffs * float(other))
        r, a, b = co
        return Jet(self.alg, r, _mul_coeffs(self.alg, r, a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.alg, self.order, self.coeffs / float(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * float(other)

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(p * log(self))
        if float(p).is_integer():
            n = int(p)
            if n < 0:
                return (self ** (-n)).reciprocal()
            result = Jet.constant(1.0, self.alg.dim, self.order)
            base = self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        x0 = self.value
        if x0 <= 0:
            raise ValueError("non-integer power of a jet with non-positive value")
        derivs = []
        coef = 1.0
        for n in range(self.order + 1):
            derivs.append(coef * x0 ** (p - n))
            coef *= p - n
        return self.compose(derivs)

    def __rpow__(self, base):
        return exp(self * math.log(float(base)))

    def compose(self, derivs: Sequence[float]) -> "Jet":
        """Jet of ``F(self)`` given ``F^(n)(self.value)`` for ``n = 0..order``."""
        K = self.order
        if len(derivs) < K + 1:
            raise JetOrderError("not enough derivatives for composition")
        h = self.coeffs.copy()
        h[0] = 0.0
        out = np.zeros_like(h)
        out[0] = derivs[K] / math.factorial(K)
        for n in range(K - 1, -1, -1):
            out = _mul_coeffs(self.alg, K, out, h)
            out[0] += derivs[n] / math.factorial(n)
        return Jet(self.alg, K, out)

    def reciprocal(self) -> "Jet":
        x0 = self.value
        if x0 == 0.0:
            raise ZeroDivisionError("reciprocal of a jet with zero value")
        derivs = [(-1) ** n * math.factorial(n) / x0 ** (n + 1) for n in range(self.order + 1)]
        return self.compose(derivs)

    def __repr__(self):
        return f"Jet(order={self.order}, value={self.value:.6g})"


def _is_jet(u) -> bool:
    return isinstance(u, Jet)


def exp(u):
    if not _is_jet(u):
        return math.exp(u)
    e = math.exp(u.value)
    return u.compose([e] * (u.order + 1))


def log(u):
    if not _is_jet(u):
        return math.log(u)
    x0 = u.value
    if x0 <= 0:
        raise ValueError("log of a jet with non-positive value")
    derivs = [math.log(x0)] + [
        (-1) ** (n - 1) * math.factorial(n - 1) / x0**n for n in range(1, u.order + 1)
    ]
    return u.compose(derivs)


def sqrt(u):
    if not _is_jet(u):
        return math.sqrt(u)
    return u**0.5


def sin(u):
    if not _is_jet(u):
        return math.sin(u)
    s, c = math.sin(u.value), math.cos(u.value)
    cycle = [s, c, -s, -c]
    return u.compose([cycle[n % 4] for n in range(u.order + 1)])


def cos(u):
    if not _is_jet(u):
        return math.cos(u)
    s, c = math.sin(u.value), math.cos(u.value)
    cycle = [c, -s, -c, s]
    return u.compose([cycle[n % 4] for n in range(u.order + 1)])


def apply_derivatives(u, derivs: Sequence[float]):
    """Evaluate a univariate function known through its derivatives at ``u``.

    ``derivs[n]`` is the ``n``-th derivative at ``float(u)``.  For a plain
    float only ``derivs[0]`` is used.
    """
    if not _is_jet(u):
        return float(derivs[0])
    return u.compose(derivs)


def coordinate_jets(point: Sequence[float], order: int) -> list[Jet]:
    m = len(point)
    return [Jet.variable(i, float(point[i]), m, order) for i in range(m)]


def as_jet(value, dim: int, order: int) -> Jet:
    if isinstance(value, Jet):
        if value.order < order:
            raise JetOrderError(
                f"component returned a jet of order {value.order} < requested {order}"
            )
        return value.truncate(order)
    return Jet.constant(float(value), dim, order)


class JetTensor:
    """Dense array of jets sharing one truncation order.

    ``data`` has shape ``tensor_shape + (n_coeffs,)``.
    """

    __slots__ = ("alg", "order", "data")

    def __init__(self, alg: JetAlgebra, order: int, data: np.ndarray):
        self.alg = alg
        self.order = order
        self.data = data

    @classmethod
    def from_jets(cls, jets, dim: int, order: int) -> "JetTensor":
        arr = np.asarray(jets, dtype=object)
        alg = algebra(dim)
        data = np.empty(arr.shape + (alg.sizes[order],))
        for idx in np.ndindex(arr.shape):
            data[idx] = as_jet(arr[idx], dim, order).coeffs
        return cls(alg, order, data)

    @classmethod
    def constant(cls, values, dim: int, order: int) -> "JetTensor":
        values = np.asarray(values, dtype=float)
        alg = algebra(dim)
        data = np.zeros(values.shape + (alg.sizes[order],))
        data[..., 0] = values
        return cls(alg, order, data)

    @property
    def shape(self):
        return self.data.shape[:-1]

    @property
    def value(self) -> np.ndarray:
        return self.data[..., 0].copy()

    def __getitem__(self, idx) -> Jet:
        if not isinstance(idx, tuple):
            idx = (idx,)
        if len(idx) != len(self.shape):
            raise IndexError("JetTensor indexing must select a single jet")
        return Jet(self.alg, self.order, self.data[idx])

    def truncate(self, order: int) -> "JetTensor":
        if order > self.order:
            raise JetOrderError("cannot raise jet order by truncation")
        return JetTensor(self.alg, order, self.data[..., : self.alg.sizes[order]])

    def grad(self) -> "JetTensor":
        """Append a differentiation slot: ``out[..., p] = d/dx_p self[...]``."""
        if self.order == 0:
            raise JetOrderError("insufficient jet order remaining for differentiation")
        parts = []
        for v in range(self.alg.dim):
            src, fac = self.alg.derivative_tables(v, self.order)
            parts.append(self.data[..., src] * fac)
        return JetTensor(self.alg, self.order - 1, np.stack(parts, axis=-2))

    def __add__(self, other: "JetTensor") -> "JetTensor":
        r = min(self.order, other.order)
        a, b = self.truncate(r), other.truncate(r)
        return JetTensor(self.alg, r, a.data + b.data)

    def __sub__(self, other: "JetTensor") -> "JetTensor":
        r = min(self.order, other.order)
        a, b = self.truncate(r), other.truncate(r)
        return JetTensor(self.alg, r, a.data - b.data)

    def __neg__(self):
        return JetTensor(self.alg, self.order, -self.data)

    def scale(self, c: float) -> "JetTensor":
        return JetTensor(self.alg, self.order, self.data * c)

    def transpose(self, axes) -> "JetTensor":
        axes = tuple(axes) + (len(self.shape),)
        return JetTensor(self.alg, self.order, self.data.transpose(axes))


def jeinsum(subscripts: str, *operands: JetTensor) -> JetTensor:
    """Einstein summation over tensor indices with jet products of entries.

    Operands are multiplied left to right; each pairwise step is an ordinary
    ``einsum`` over tensor slots combined with truncated Taylor products.
    """
    inputs, output = subscripts.replace(" ", "").split("->")
    terms = inputs.split(",")
    if len(terms) != len(operands):
        raise ValueError("subscript count does not match operand count")
    if len(operands) == 1:
        data = np.einsum(f"{terms[0]}Z->{output}Z", operands[0].data)
        return JetTensor(operands[0].alg, operands[0].order, data)

    acc, acc_idx = operands[0], terms[0]
    for k in range(1, len(operands)):
        op, idx = operands[k], terms[k]
        later = set("".join(terms[k + 1 :]) + output)
        keep = "".join(dict.fromkeys(c for c in acc_idx + idx if c in later))
        r = min(acc.order, op.order)
        pa, pb, starts = acc.alg.pair_tables(r)
        prod = np.einsum(
            f"{acc_idx}Z,{idx}Z->{keep}Z",
            acc.data[..., pa],
            op.data[..., pb],
            optimize=True,
        )
        acc = JetTensor(acc.alg, r, np.add.reduceat(prod, starts, axis=-1))
        acc_idx = keep
    if acc_idx != output:
        acc = JetTensor(acc.alg, acc.order, np.einsum(f"{acc_idx}Z->{output}Z", acc.data))
    return acc


def jet_inverse(g: JetTensor) -> JetTensor:
    """Inverse of a square jet matrix by a terminating Neumann series."""
    g0 = g.value
    g0inv = np.linalg.inv(g0)
    h = JetTensor(g.alg, g.order, g.data.copy())
    h.data[..., 0] = 0.0
    inv0 = JetTensor.constant(g0inv, g.alg.dim, g.order)
    step = -jeinsum("ij,jk->ik", inv0, h)
    term = inv0
    total = inv0
    for _ in range(g.order):
        term = jeinsum("ij,jk->ik", step, term)
        total = total + term
    return total
