"""Pointwise curvature models and isometry / homothety / variable matching.

A k-curvature model at a point is the tuple ``(V, eps, A^0, ..., A^k)`` with
``A^l`` the components of ``nabla^l R`` in a basis of ``V`` and ``eps`` the
Gram matrix of that basis.  Matching searches the group ``O(eps)`` for a
linear isometry ``phi`` (and a scale ``lam``) with

    lam^(l+2) phi^* A2^l = A1^l,   0 <= l <= k.

Both models are first brought to a basis with Gram ``eta = diag(-1.., +1..)``
and the search runs there; results are mapped back to the caller's bases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import expm
from scipy.stats import qmc

from .tensors import CO, LocalGeometry, MetricField, curvature_derivatives

MAX_LIBRARY_LEVEL = 3
SUCCESS_TOL = 1e-7
FAILURE_TOL = 1e-3
ZERO_TOL = 1e-10
# search region ||phi||_F <= GROUP_CAP in the canonical basis; see _match
GROUP_CAP = 1e3
MAX_STEP = 1.0


class GramSchmidtBreakdown(ArithmeticError):
    """Every remaining pivot is null; supply a seed frame."""


class SignatureMismatch(ValueError):
    pass


class NoScalingError(ValueError):
    """All levels vanish on one side only, so no scale factor can exist."""


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class CurvatureModel:
    """``components[l]`` holds ``A^l`` as a dense ``(m,) * (l + 4)`` array.

    ``frame`` (columns in coordinates) is kept when the model was built from
    a metric so that matches can be reported as coordinate maps.
    """

    gram: np.ndarray
    components: tuple[np.ndarray, ...]
    signature: tuple[int, int]
    frame: np.ndarray | None = None
    point: np.ndarray | None = None
    name: str = ""

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def k(self) -> int:
        return len(self.components) - 1

    def truncate(self, k: int) -> "CurvatureModel":
        if k > self.k:
            raise ValueError(f"model has levels 0..{self.k}, asked for {k}")
        return replace(self, components=self.components[: k + 1])

    def operator(self, level: int) -> np.ndarray:
        """``A^l`` with the fourth slot raised by the Gram matrix (operator form)."""
        return np.moveaxis(np.tensordot(self.components[level], np.linalg.inv(self.gram), axes=([3], [0])), -1, 3)

    def scaled(self, mu: float) -> "CurvatureModel":
        """Replace ``A^l`` by ``mu^(-l-2) A^l``."""
        return replace(self, components=tuple(mu ** (-l - 2) * c for l, c in enumerate(self.components)))


def signature_of(gram: np.ndarray) -> tuple[int, int]:
    ev = np.linalg.eigvalsh(0.5 * (gram + gram.T))
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.min(np.abs(ev)) <= 1e-12 * scale:
        raise ValueError("Gram matrix is degenerate")
    return int(np.sum(ev < 0)), int(np.sum(ev > 0))


def pseudo_orthonormal_frame(g: np.ndarray, seed: np.ndarray | None = None, tol: float = 1e-12) -> np.ndarray:
    """Modified Gram-Schmidt with pivoting on ``|g(v, v)|``.

    Returns columns ``E`` with ``E^T g E = diag(-1.., +1..)``.  When every
    remaining vector is null, sums and differences of pairs are tried as
    pivots before giving up.
    """
    m = g.shape[0]
    vecs = [np.array(v, dtype=float) for v in (np.eye(m) if seed is None else np.asarray(seed, dtype=float).T)]
    scale = max(1.0, float(np.max(np.abs(g))))
    out, signs = [], []
    while vecs:
        norms = [float(v @ g @ v) for v in vecs]
        i = int(np.argmax(np.abs(norms)))
        if abs(norms[i]) > tol * scale:
            v = vecs.pop(i)
            n = norms[i]
        else:
            best, pick = 0.0, None
            for a in range(len(vecs)):
                for b in range(a + 1, len(vecs)):
                    for s in (1.0, -1.0):
                        w = vecs[a] + s * vecs[b]
                        val = float(w @ g @ w)
                        if abs(val) > abs(best):
                            best, pick = val, (a, w)
            if pick is None or abs(best) <= tol * scale:
                raise GramSchmidtBreakdown("null pivot after pivot search; supply a seed frame")
            v, n = pick[1], best
            vecs.pop(pick[0])
        sgn = 1.0 if n > 0 else -1.0
        v = v / math.sqrt(abs(n))
        vecs = [w - sgn * float(w @ g @ v) * v for w in vecs]
        out.append(v)
        signs.append(sgn)
    order = sorted(range(m), key=lambda j: (signs[j], j))
    return np.column_stack([out[j] for j in order])


def _pull(T: np.ndarray, M: np.ndarray) -> np.ndarray:
    """``T(M., M., ...)`` for a single matrix ``M``."""
    for s in range(T.ndim):
        T = np.moveaxis(np.tensordot(T, M, axes=([s], [0])), -1, s)
    return T


def build_model(g: MetricField, point, k: int, frame=None) -> CurvatureModel:
    """k-curvature model at ``point`` in a pseudo-orthonormal frame.

    ``frame`` may be any basis (columns in coordinates); it is used as given,
    so its Gram matrix need not be diagonal.  Without it a signature-ordered
    frame comes from :func:`pseudo_orthonormal_frame`.
    """
    if not 0 <= k <= MAX_LIBRARY_LEVEL:
        raise ValueError(f"level k must be in 0..{MAX_LIBRARY_LEVEL}")
    levels = curvature_derivatives(g, point, k)
    G = g.matrix(point)
    E = pseudo_orthonormal_frame(G) if frame is None else np.asarray(frame, dtype=float)
    gram = E.T @ G @ E
    comps = tuple(_pull(t.entries, E) for t in levels)
    return CurvatureModel(gram, comps, signature_of(gram), E, np.asarray(point, dtype=float), g.name)


def curvature_symmetry_residual(model: CurvatureModel) -> float:
    """Largest violation of the algebraic symmetries of ``nabla^l R``."""
    worst = 0.0
    for l, c in enumerate(model.components):
        sc = max(1.0, float(np.max(np.abs(c))))
        checks = [c + np.swapaxes(c, 0, 1), c + np.swapaxes(c, 2, 3)]
        checks.append(c + np.moveaxis(c, [0, 1, 2], [1, 2, 0]) + np.moveaxis(c, [0, 1, 2], [2, 0, 1]))
        if l == 0:
            checks.append(c - np.transpose(c, (2, 3, 0, 1)))
        worst = max(worst, max(float(np.max(np.abs(x))) for x in checks) / sc)
    return worst


# ---------------------------------------------------------------------------
# matching


@dataclass(frozen=True)
class HomothetyMatch:
    """Result of a match between two models.

    ``frame_map`` is ``phi`` in the models' own bases with
    ``phi^T eps2 phi = eps1``; ``lam`` the scale (1 for isometries, always
    reported positive using ``(phi, lam) ~ (-phi, -lam)``); ``residuals``
    the per-level relative residuals ``||lam^(l+2) phi^* A2 - A1|| / ||A1||``
    (absolute where ``A1`` vanishes).
    """

    frame_map: np.ndarray
    lam: float
    residuals: tuple[float, ...]
    converged: bool
    mode: str
    status: str
    levels: tuple[int, ...]
    message: str = ""
    differential: np.ndarray | None = None

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


@dataclass(frozen=True)
class VariableMatch:
    """One independent homothety match per level."""

    levels: tuple[HomothetyMatch, ...]

    @property
    def pairs(self) -> list[tuple[np.ndarray, float] | None]:
        return [(m.frame_map, m.lam) if m.converged else None for m in self.levels]

    @property
    def succeeded(self) -> list[bool]:
        return [m.converged for m in self.levels]


def _canonical_basis(gram: np.ndarray) -> np.ndarray:
    """``B`` with ``B^T gram B = eta`` (negative directions first)."""
    w, Q = np.linalg.eigh(0.5 * (gram + gram.T))
    order = np.argsort(np.sign(w), kind="stable")
    return Q[:, order] / np.sqrt(np.abs(w[order]))


def _lie_basis(eta: np.ndarray) -> np.ndarray:
    m = eta.shape[0]
    gens = []
    for a in range(m):
        for b in range(a + 1, m):
            A = np.zeros((m, m))
            A[a, b], A[b, a] = 1.0, -1.0
            gens.append(eta @ A)
    return np.array(gens).reshape(-1, m, m)


def _reflections(p: int, m: int) -> list[np.ndarray]:
    """One sign pattern per connected component of ``O(p, m - p)``."""
    flips = [[]]
    if p > 0:
        flips.append([0])
    if p < m:
        flips = flips + [f + [p] for f in flips]
    out = []
    for f in flips:
        d = np.ones(m)
        d[f] = -1.0
        out.append(np.diag(d))
    return out


def _pull_batch(T: np.ndarray, Psi: np.ndarray) -> np.ndarray:
    """``T(Psi_b., ...)`` for each matrix of a batch."""
    B, m = Psi.shape[0], Psi.shape[1]
    out = np.broadcast_to(T, (B,) + T.shape)
    r = out.ndim - 1
    for s in range(r):
        x = np.moveaxis(out, s + 1, -1)
        shp = x.shape
        x = np.matmul(x.reshape(B, -1, m), Psi).reshape(shp)
        out = np.moveaxis(x, -1, s + 1)
    return out


def _derive(Q: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Derivation action ``sum_s Q(.., E v_s, ..)`` for each generator: shape ``(B, d) + Q.shape[1:]``."""
    B, r, m = Q.shape[0], Q.ndim - 1, Q.shape[1]
    out = np.zeros((B, len(gens)) + Q.shape[1:])
    for s in range(r):
        x = np.moveaxis(Q, s + 1, -1).reshape(B, -1, m)
        y = np.matmul(x[:, None], gens[None])
        shp = (B, len(gens)) + tuple(np.delete(np.array(Q.shape[1:]), s)) + (m,)
        out += np.moveaxis(y.reshape(shp), -1, s + 2)
    return out


class _Problem:
    """Stacked residual over the active levels in canonical coordinates."""

    def __init__(self, A1, A2, levels, homothety: bool):
        self.A1 = [a.reshape(-1) for a in A1]
        self.A2 = A2
        self.levels = list(levels)
        self.homothety = homothety
        self.w = [1.0 / np.linalg.norm(a) for a in self.A1]
        self.n = [l + 2 for l in self.levels]

    def evaluate(self, Psi: np.ndarray, gens: np.ndarray | None = None):
        B = Psi.shape[0]
        Q = [_pull_batch(a, Psi).reshape(B, -1) for a in self.A2]
        DQ = None
        if gens is not None:
            DQ = [
                _derive(_pull_batch(a, Psi), gens).reshape(B, len(gens), -1) for a in self.A2
            ]
        if self.homothety:
            lam, dlam = self._eliminate(Q, DQ)
        else:
            lam, dlam = np.ones(B), None
        res, jac = [], []
        for j, n in enumerate(self.n):
            ln = lam**n
            r = self.w[j] * (ln[:, None] * Q[j] - self.A1[j])
            res.append(r)
            if DQ is not None:
                J = ln[:, None, None] * DQ[j]
                if dlam is not None:
                    J = J + (n * lam ** (n - 1))[:, None, None] * dlam[:, :, None] * Q[j][:, None, :]
                jac.append(self.w[j] * J)
        return lam, res, jac

    def _eliminate(self, Q, DQ):
        a1, n = self.A1[0], self.n[0]
        nn = float(a1 @ a1)
        mu = Q[0] @ a1 / nn
        B = len(mu)
        lam = np.ones(B)
        pos = mu > 0
        lam[pos] = mu[pos] ** (-1.0 / n)
        neg = mu < 0
        lam[neg] = np.abs(mu[neg]) ** (-1.0 / n) * (-1.0 if n % 2 else 1.0)
        if n % 2 == 0 and len(self.levels) > 1:
            # both signs of lam are admissible; keep the one with smaller residual
            cost = []
            for sgn in (1.0, -1.0):
                tot = np.zeros(B)
                for j, e in enumerate(self.n):
                    r = self.w[j] * (((sgn * lam) ** e)[:, None] * Q[j] - self.A1[j])
                    tot += np.einsum("bi,bi->b", r, r)
                cost.append(tot)
            lam = np.where(cost[1] < cost[0], -lam, lam)
        dlam = None
        if DQ is not None:
            dmu = DQ[0] @ a1 / nn
            safe = np.where(np.abs(mu) > 1e-300, mu, 1.0)
            dlam = np.where(np.abs(mu)[:, None] > 1e-300, -(lam / (n * safe))[:, None] * dmu, 0.0)
        return lam, dlam

    def level_residuals(self, res) -> np.ndarray:
        return np.stack([np.linalg.norm(r, axis=1) for r in res], axis=1)


def _halton_starts(d: int, count: int) -> np.ndarray:
    if d == 0:
        return np.zeros((1, 0))
    pts = 4.0 * qmc.Halton(d, scramble=False).random(count) - 2.0
    pts[0] = 0.0  # the first Halton point is the corner; use the identity instead
    return pts


def _lm(problem: _Problem, Psi: np.ndarray, gens: np.ndarray, max_iter: int, stop: float, cap: float):
    B, d = Psi.shape[0], len(gens)
    nu = np.full(B, 1e-3)
    lam, res, jac = problem.evaluate(Psi, gens)
    cost = sum(np.einsum("bi,bi->b", r, r) for r in res)
    done = np.zeros(B, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        act = ~done
        if not act.any() or np.min(cost) < stop**2:
            break
        idx = np.nonzero(act)[0]
        J = np.concatenate([j[idx] for j in jac], axis=2)  # (b, d, N)
        r = np.concatenate([x[idx] for x in res], axis=1)
        JtJ = np.einsum("bdi,bei->bde", J, J)
        g = np.einsum("bdi,bi->bd", J, r)
        diag = np.einsum("bdd->bd", JtJ)
        A = JtJ + (nu[idx][:, None] * (diag + 1e-12))[:, :, None] * np.eye(d)[None]
        try:
            step = -np.linalg.solve(A, g[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = -np.einsum("bde,be->bd", np.linalg.pinv(A), g)
        size = np.linalg.norm(step, axis=1)
        step *= np.minimum(1.0, MAX_STEP / np.maximum(size, 1e-300))[:, None]
        X = np.einsum("bd,dij->bij", step, gens)
        trial = Psi[idx] @ expm(X)
        inside = np.linalg.norm(trial.reshape(len(idx), -1), axis=1) <= cap
        trial[~inside] = Psi[idx][~inside]
        lam_t, res_t, jac_t = problem.evaluate(trial, gens)
        cost_t = sum(np.einsum("bi,bi->b", x, x) for x in res_t)
        better = inside & np.isfinite(cost_t) & (cost_t < cost[idx])
        cost_old = cost[idx]
        good = idx[better]
        Psi[good] = trial[better]
        cost[good] = cost_t[better]
        lam[good] = lam_t[better]
        for j in range(len(res)):
            res[j][good] = res_t[j][better]
            jac[j][good] = jac_t[j][better]
        stalled = good[(cost_prev := cost_old[better]) - cost_t[better] < 1e-10 * cost_prev]
        done[stalled] = True
        nu[good] = np.maximum(nu[good] / 3.0, 1e-12)
        nu[idx[~better]] *= 4.0
        small = np.linalg.norm(step, axis=1) < 1e-15 * (1 + np.linalg.norm(X.reshape(len(idx), -1), axis=1))
        done[idx[~better & small]] = True
        done[idx[nu[idx] > 1e10]] = True
        done[cost < 1e-30] = True
    return Psi, lam, res, it


def _status(best: float, tol: float) -> str:
    if best < tol:
        return "success"
    if best > FAILURE_TOL:
        return "no_match"
    return "inconclusive"


def _match(
    M1: CurvatureModel,
    M2: CurvatureModel,
    levels,
    mode: str,
    n_starts: int = 64,
    max_iter: int = 200,
    tol: float = SUCCESS_TOL,
    cap: float = GROUP_CAP,
) -> HomothetyMatch:
    """Multi-start Levenberg-Marquardt over ``O(eta)``.

    The search is confined to ``||psi||_F <= cap``.  Null curvature tensors
    have non-closed orbits under the non-compact group, so without the cap
    the residual between genuinely different models can creep towards zero
    along unbounded boosts; a failure verdict is relative to this region.
    """
    if M1.dim != M2.dim:
        raise SignatureMismatch(f"dimension mismatch: {M1.dim} vs {M2.dim}")
    if M1.signature != M2.signature:
        raise SignatureMismatch(f"signature mismatch: {M1.signature} vs {M2.signature}")
    levels = tuple(levels)
    if max(levels) > min(M1.k, M2.k):
        raise ValueError("requested level exceeds model level")
    homothety = mode != "isometry"
    m, p = M1.dim, M1.signature[0]
    B1, B2 = _canonical_basis(M1.gram), _canonical_basis(M2.gram)
    eta = np.diag([-1.0] * p + [1.0] * (m - p))
    A1 = {l: _pull(M1.components[l], B1) for l in levels}
    A2 = {l: _pull(M2.components[l], B2) for l in levels}
    n1 = {l: float(np.linalg.norm(A1[l])) for l in levels}
    n2 = {l: float(np.linalg.norm(A2[l])) for l in levels}
    zero1 = {l: n1[l] <= ZERO_TOL for l in levels}
    zero2 = {l: n2[l] <= ZERO_TOL for l in levels}

    def result(psi, lam, resid, status, msg="", it_converged=None):
        if lam < 0:
            psi, lam = -psi, -lam
        phi = B2 @ psi @ np.linalg.inv(B1)
        diff = None
        if M1.frame is not None and M2.frame is not None:
            diff = lam * M2.frame @ phi @ np.linalg.inv(M1.frame)
        return HomothetyMatch(
            frame_map=phi,
            lam=float(lam),
            residuals=tuple(float(r) for r in resid),
            converged=status == "success",
            mode=mode,
            status=status,
            levels=levels,
            message=msg,
            differential=diff,
        )

    active = [l for l in levels if not (zero1[l] and zero2[l])]
    mismatch = [l for l in levels if zero1[l] != zero2[l]]
    if mismatch:
        if homothety and all(zero1[l] for l in levels) != all(zero2[l] for l in levels):
            raise NoScalingError("all levels vanish on one side only: no scale factor exists")
        resid = [1.0 if l in mismatch else 0.0 for l in levels]
        return result(np.eye(m), 1.0, resid, "no_match", f"level(s) {mismatch} vanish on one side only")
    if not active:
        return result(np.eye(m), 1.0, [0.0] * len(levels), "success", "both models vanish")

    problem = _Problem([A1[l] for l in active], [A2[l] for l in active], active, homothety)
    gens = _lie_basis(eta)
    starts = _halton_starts(len(gens), n_starts)
    base = np.einsum("sd,dij->sij", starts, gens) if len(gens) else np.zeros((1, m, m))
    expo = expm(base)
    Psi0 = np.concatenate([R @ expo for R in _reflections(p, m)], axis=0)
    Psi, lam, res, iters = _lm(problem, Psi0.copy(), gens, max_iter, stop=1e-3 * tol, cap=cap)
    per_level = problem.level_residuals(res)
    worst = per_level.max(axis=1)
    b = int(np.argmin(worst))
    resid, j = [], 0
    for l in levels:
        if l in active:
            resid.append(per_level[b, j])
            j += 1
        else:
            resid.append(0.0)
    status = _status(float(worst[b]), tol)
    msg = f"{len(Psi0)} starts, {iters} iterations"
    return result(Psi[b], float(lam[b]), resid, status, msg)


def isometry_match(M1: CurvatureModel, M2: CurvatureModel, **kw) -> HomothetyMatch:
    """Search for ``phi in O(eps)`` with ``phi^* A2^l = A1^l`` for all levels."""
    return _match(M1, M2, range(min(M1.k, M2.k) + 1), "isometry", **kw)


def homothety_match(M1: CurvatureModel, M2: CurvatureModel, **kw) -> HomothetyMatch:
    """Search for ``(phi, lam)`` with ``lam^(l+2) phi^* A2^l = A1^l`` for all levels.

    Raises :class:`NoScalingError` when every level vanishes on exactly one side.
    """
    return _match(M1, M2, range(min(M1.k, M2.k) + 1), "homothety", **kw)


def variable_match(M1: CurvatureModel, M2: CurvatureModel, **kw) -> VariableMatch:
    """Independent homothety match of each single level ``l``."""
    out = []
    for l in range(min(M1.k, M2.k) + 1):
        try:
            out.append(_match(M1, M2, (l,), "variable", **kw))
        except NoScalingError as exc:
            m = M1.dim
            out.append(HomothetyMatch(np.eye(m), 1.0, (1.0,), False, "variable", "no_match", (l,), str(exc)))
    return VariableMatch(tuple(out))


def lemma12_equivalence_check(match: HomothetyMatch, M1: CurvatureModel, M2: CurvatureModel) -> float:
    """Operator-form check of a tensor-form match.

    With ``Phi = lam phi`` the operator models ``A^l`` (fourth slot raised by
    the Gram matrix) must satisfy ``Phi A1^l(v, ...) = A2^l(Phi v, ...)``.
    Returns the largest deviation relative to ``max(1, max |A1^l|)``.
    """
    if match.lam <= 0:
        raise ValueError("the check needs lam > 0")
    Phi = match.lam * match.frame_map
    Phi_inv = np.linalg.inv(Phi)
    worst = 0.0
    for l in match.levels:
        O1, O2 = M1.operator(l), M2.operator(l)
        pulled = O2
        for s in range(O2.ndim):
            mat = Phi_inv.T if s == 3 else Phi
            pulled = np.moveaxis(np.tensordot(pulled, mat, axes=([s], [0])), -1, s)
        dev = float(np.max(np.abs(pulled - O1))) if O1.size else 0.0
        worst = max(worst, dev / max(1.0, float(np.max(np.abs(O1)))))
    return worst


# ---------------------------------------------------------------------------
# Singer stabilizer chain


@dataclass(frozen=True)
class SingerProfile:
    dims: tuple[int, ...]
    singer_number: int
    algebra_dim: int


def _ho_basis(g: np.ndarray) -> list[np.ndarray]:
    """Basis of ``so(g) + R Id`` as endomorphisms ``a^i_j``."""
    m = g.shape[0]
    ginv = np.linalg.inv(g)
    out = []
    for a in range(m):
        for b in range(a + 1, m):
            A = np.zeros((m, m))
            A[a, b], A[b, a] = 1.0, -1.0
            out.append(ginv @ A)
    out.append(np.eye(m))
    return out


def _act(a: np.ndarray, T: np.ndarray, out_slot: int) -> np.ndarray:
    """Derivation action on a tensor with one output slot: commutator minus inputs."""
    res = np.zeros_like(T)
    for s in range(T.ndim):
        if s == out_slot:
            res += np.moveaxis(np.tensordot(T, a, axes=([s], [1])), -1, s)
        else:
            res -= np.moveaxis(np.tensordot(T, a, axes=([s], [0])), -1, s)
    return res


def singer_profile(g: MetricField, point, s_max: int = 2, cutoff: float = 1e-9) -> SingerProfile:
    """Dimensions ``d_s`` of the stabilizers of ``(r, nabla r, ..., nabla^s r)`` in ``so(g) + R Id``.

    ``r`` is the curvature operator (fourth slot raised).  Dimensions come
    from the rank of the stacked action matrix with singular-value cutoff
    ``cutoff * sigma_max``.
    """
    if s_max < 0 or s_max > MAX_LIBRARY_LEVEL:
        raise ValueError(f"s_max must be in 0..{MAX_LIBRARY_LEVEL}")
    levels = curvature_derivatives(g, point, s_max)
    G = g.matrix(point)
    Ginv = np.linalg.inv(G)
    basis = _ho_basis(G)
    D = len(basis)
    rows = []
    dims = []
    for t in levels:
        op = np.moveaxis(np.tensordot(t.entries, Ginv, axes=([3], [0])), -1, 3)
        rows.append(np.column_stack([_act(a, op, 3).reshape(-1) for a in basis]))
        M = np.vstack(rows)
        sv = np.linalg.svd(M, compute_uv=False)
        rank = int(np.sum(sv > cutoff * sv[0])) if sv.size and sv[0] > 0 else 0
        dims.append(D - rank)
    singer = next(s for s in range(len(dims)) if all(d == dims[s] for d in dims[s:]))
    return SingerProfile(tuple(dims), singer, D)
