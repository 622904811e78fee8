"""Shared (preset, point) sampling for the property tests."""
import numpy as np

from hcg import zoo

WALKER_PRESETS = [
    ("walker.exp", {}),
    ("walker.exp", {"a": 2.0}),
    ("walker.log", {}),
    ("walker.pow", {"eps": 3.0}),
    ("walker.pow", {"eps": -1.0}),
    ("walker.quad", {"alpha": "exp"}),
    ("walker.sym", {}),
    ("walker.quartic", {}),
]
WARPED_PRESETS = [
    ("warped.sphere", {"t": 1.0}),
    ("warped.flat", {"t": 0.5}),
    ("qstruct.flat_theta", {}),
]
ALL_PRESETS = WALKER_PRESETS + WARPED_PRESETS

_CACHE = {}


def metric(name, params):
    key = (name, tuple(sorted(params.items())))
    if key not in _CACHE:
        _CACHE[key] = zoo.build(name, **params)
    return _CACHE[key]


def point_for(name, rng):
    """Random point inside the chart; Walker ``y`` stays in ``[0.4, 2]``."""
    if name.startswith("walker."):
        return np.array([rng.uniform(-1, 1), rng.uniform(0.4, 2.0), rng.uniform(-1, 1)])
    return np.array([rng.uniform(-1, 1), rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)])


def draws(n, seed=0, presets=ALL_PRESETS):
    """``n`` reproducible ``(label, metric, point)`` triples cycling through ``presets``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        name, params = presets[i % len(presets)]
        out.append((f"{name}{params}", metric(name, params), point_for(name, rng)))
    return out


def _scale(a):
    return max(1.0, float(np.max(np.abs(a))))


def property_residuals(g, p):
    """Relative residuals of the curvature symmetries, both Bianchi identities and nabla g = 0."""
    from hcg.tensors import CO, LocalGeometry, TensorField

    geo = LocalGeometry(g, p, order=3)
    R = geo.riemann.value
    D = geo.curvature_fields(1)[1].jets.value
    s = _scale(R)
    skew = max(
        np.max(np.abs(R + R.transpose(1, 0, 2, 3))),
        np.max(np.abs(R + R.transpose(0, 1, 3, 2))),
        np.max(np.abs(R - R.transpose(2, 3, 0, 1))),
    )
    b1 = R + np.einsum("jkil->ijkl", R) + np.einsum("kijl->ijkl", R)
    b2 = D + np.einsum("ijlmk->ijklm", D) + np.einsum("ijmkl->ijklm", D)
    dg = geo.nabla(TensorField(geo.metric, (CO, CO))).jets.value
    return {
        "pair_skew": skew / s,
        "bianchi1": float(np.max(np.abs(b1))) / s,
        "bianchi2": float(np.max(np.abs(b2))) / _scale(D),
        "compat": float(np.max(np.abs(dg))) / _scale(g.matrix(p)),
    }


def scaled_metric(g, c):
    """The metric ``c^2 g`` on the same chart."""
    from hcg.tensors import MetricField

    def components(x):
        return [[c * c * v for v in row] for row in g.components(x)]

    return MetricField(g.dim, g.signature, components, g.domain, f"{c:g}^2*{g.name}", g.coordinates)
