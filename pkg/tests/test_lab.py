import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import erf

from hcg import lab, zoo
from hcg.jets import exp
from hcg.tensors import WEYL_ORDERS, homothety_pullback_residual, weyl_scalars


@pytest.fixture(scope="module")
def sphere():
    return zoo.build("warped.sphere", t=1.0)


def test_vsi_sweep():
    flat = lab.vsi_sweep(zoo.euclidean(3), [[0.0, 0.0, 0.0]])
    assert flat.vsi and flat.max_abs == 0.0
    walker = lab.vsi_sweep(zoo.build("walker.log"), [[0.1, y, 0.2] for y in (0.5, 1.0, 2.0)])
    assert walker.vsi and walker.max_abs <= 1e-10


def test_vsi_sweep_flags_warped_sphere(sphere):
    res = lab.vsi_sweep(sphere, [[0.5, 0.0, 0.0], [0.0, 0.0, 0.0]])
    assert not res.vsi
    # tau = e^{-x} * 3/2 at x = 0 is among the catalogue values
    assert res.max_abs >= 1.5
    assert res.worst_sample in (0, 1)


def test_mu_level_and_gradient(sphere):
    probe = lab.LevelSetProbe("tau", (0.0, 0.0, 0.0))
    assert probe.order == 2
    assert lab.mu_level(probe, sphere, [2.0, 0.3, 0.1]) == pytest.approx(math.e, rel=1e-12)
    mu, dmu = lab.mu_gradient(probe, sphere, [2.0, 0.3, 0.1])
    # mu = e^{x/2}
    np.testing.assert_allclose(dmu, [0.5 * mu, 0.0, 0.0], atol=1e-12)
    with pytest.raises(lab.VanishingInvariantError):
        lab.mu_level(lab.LevelSetProbe("tau", (0.0, 1.0, 0.0)), zoo.build("walker.exp"), [0.0, 1.0, 0.0])


def _stereo_geodesic(length, h):
    g = zoo.sphere_stereographic()
    st = lab.GeodesicState(np.zeros(2), lab.unit_vector(g, [0.0, 0.0], [1.0, 0.0]))
    return g, lab.geodesic_integrate(g, st, length, h)


def test_geodesic_meridian():
    # unit-speed meridian from the pole: u = tan(s / 2)
    g, path = _stereo_geodesic(2.5, 1e-2)
    assert path[-1].arc_length == pytest.approx(2.5)
    assert path[-1].point[0] == pytest.approx(math.tan(1.25), rel=1e-7)
    assert abs(path[-1].point[1]) < 1e-14
    assert max(abs(lab.speed(g, s) - 1.0) for s in path) < 1e-8


def test_geodesic_rk4_order():
    exact = math.tan(0.75)
    errs = [abs(_stereo_geodesic(1.5, h)[1][-1].point[0] - exact) for h in (0.1, 0.05)]
    assert 12 < errs[0] / errs[1] < 20


def test_geodesic_errors():
    g = zoo.sphere_stereographic()
    with pytest.raises(ValueError):
        lab.geodesic_integrate(g, lab.GeodesicState(np.zeros(2), np.array([1.0, 0.0])), 1.0)
    st = lab.GeodesicState(np.zeros(2), lab.unit_vector(g, [0.0, 0.0], [1.0, 0.0]))
    with pytest.raises(lab.GeodesicDomainExit) as info:
        lab.geodesic_integrate(g, st, 3.1, 1e-2)
    # the chart ends at u = 10, reached at s = 2 atan(10)
    assert info.value.arc_length == pytest.approx(2 * math.atan(10), abs=1e-2)
    with pytest.raises(ValueError):
        lab.unit_vector(zoo.minkowski(2), [0.0, 0.0], [1.0, 1.0])


def test_slice_distance(sphere):
    sd = lab.slice_distance(sphere, 1.5, 2.0, [0.0, 0.0, 0.0])
    assert sd.kappa == pytest.approx(2.0, abs=1e-3)
    assert sd.arc_c == pytest.approx(1.0, abs=1e-3)
    with pytest.raises(ValueError):
        lab.slice_distance(sphere, 0.0, 2.0, [0.0, 0.0, 0.0])
    with pytest.raises(lab.LevelNotReached):
        lab.level_arc_lengths(sphere, [3.0], [0.0, 0.0, 0.0], max_length=1.0)


def test_incompleteness_probe(sphere):
    res = lab.incompleteness_probe(sphere, [0.0, 0.0, 0.0])
    assert res.status == "finite"
    assert res.length == pytest.approx(2.0, abs=1e-3)
    flat = lab.incompleteness_probe(zoo.euclidean(3), [0.0, 0.0, 0.0], direction=[1.0, 0.0, 0.0], budget=10.0)
    assert flat.status == "exceeded_budget" and flat.length == 10.0
    with pytest.raises(lab.VanishingInvariantError):
        lab.incompleteness_probe(zoo.euclidean(3), [0.0, 0.0, 0.0])


def test_incompleteness_of_flat_cone():
    # t = 2 over S^2 is the flat cone R^3 minus a point; the apex sits at distance 1
    res = lab.incompleteness_probe(zoo.build("warped.sphere", t=2.0), [0.0, 0.0, 0.0], direction=[-1.0, 0.0, 0.0])
    assert res.status == "finite"
    assert res.length == pytest.approx(1.0, abs=1e-3)


def test_classify_walker_alpha():
    power = lab.classify_walker_alpha(zoo.alpha_inverse_square(4.0, 1.0), [1.5, 2.0, 3.0])
    assert power.power_law()
    assert power.c3 == pytest.approx(1.0, rel=1e-12)
    expo = lab.classify_walker_alpha(exp, [0.0, 0.5, 1.0])
    assert not expo.power_law()
    assert expo.ratio_constant() and expo.ratio_mean == pytest.approx(1.0)
    other = lab.classify_walker_alpha(lambda x: x * x + 1, [0.5, 1.0, 2.0])
    assert not other.power_law() and not other.ratio_constant()
    with pytest.raises(ZeroDivisionError):
        lab.classify_walker_alpha(lambda x: x * x + 1, [0.0])


def test_gaussian_derivative():
    for x in (-1.0, 0.3, 2.0):
        assert lab.gaussian_derivative(0, x) == pytest.approx(math.exp(-x * x))
        assert lab.gaussian_derivative(2, x) == pytest.approx((4 * x * x - 2) * math.exp(-x * x))


def test_variable_ch_closed_form():
    ch = lab.variable_ch_construct(2)
    assert ch.derivative(1, 0.0) == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-12)
    for x in (-1.5, 0.0, 0.7, 2.0):
        closed = x * math.sqrt(math.pi) / 2 * (1 + erf(x)) + 0.5 * math.exp(-x * x)
        assert ch.alpha(x) == pytest.approx(closed, abs=1e-10)
    with pytest.raises(ValueError):
        lab.variable_ch_construct(0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_variable_ch_derivative_of_integral(k):
    # alpha^(l)(b) - alpha^(l)(a) = int_a^b alpha^(l+1)
    ch = lab.variable_ch_construct(k)
    for l in range(k):
        a, b = -0.8, 1.3
        ref, _ = quad(lambda t: ch.derivative(l + 1, t), a, b, epsabs=1e-13)
        assert ch.derivative(l, b) - ch.derivative(l, a) == pytest.approx(ref, abs=1e-8)


def test_normalized_components_are_constant():
    ch = lab.variable_ch_construct(2)
    for l in range(3):
        for x in (-1.0, 0.0, 1.0):
            assert lab.normalized_component(ch, l, [x, 0.7, 0.0]) == pytest.approx(1.0, abs=1e-10)


def test_adaptive_simpson_failure():
    with pytest.raises(lab.QuadratureError):
        lab._adaptive_simpson(lambda t: math.sin(1 / t), 1e-4, 1.0, 1e-14, max_depth=3)


def test_character_eval():
    r = lab.character_eval(lab.CharacterSpec(2, (2.0, 1.0)), np.diag([2.0, 3.0]))
    assert r.lam == pytest.approx(12.0) and r.split
    assert not lab.character_eval(lab.CharacterSpec(2, (1.0, -1.0)), [[2.0, 5.0], [0.0, 2.0]]).split
    with pytest.raises(ValueError):
        lab.CharacterSpec(2, (0.0, 0.0))
    with pytest.raises(ValueError):
        lab.character_eval(lab.CharacterSpec(2, (1.0, 0.0)), [[1.0, 0.0], [1.0, 1.0]])
    with pytest.raises(ValueError):
        lab.character_eval(lab.CharacterSpec(2, (1.0, 0.0)), np.diag([-1.0, 1.0]))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_character_is_multiplicative(seed):
    rng = np.random.default_rng(seed)
    spec = lab.CharacterSpec(3, tuple(rng.uniform(-2, 2, 3)))
    H1, H2 = (np.triu(rng.uniform(-1, 1, (3, 3)), 1) + np.diag(rng.uniform(0.2, 3, 3)) for _ in range(2))
    lam12 = lab.character_eval(spec, H1 @ H2).lam
    assert lam12 == pytest.approx(lab.character_eval(spec, H1).lam * lab.character_eval(spec, H2).lam, rel=1e-12)
    assert lab.character_eval(lab.CharacterSpec(1, (1.0,)), [[5.0]]).lam == 5.0


@pytest.mark.parametrize("name", ["tau", "norm_R", "laplace_tau", "norm_nabla_R", "tr_rho3"])
def test_invariants_scale_under_translation_homothety(sphere, name):
    # x -> x + a is a homothety with lam = e^{a/2}; an order-l invariant picks up lam^{-l}
    a = 0.8
    lam = math.exp(a / 2)
    T = zoo.warped_translation(a)
    p = np.array([0.1, 0.4, -0.2])
    assert homothety_pullback_residual(sphere, T, lam, [p]) <= 1e-10
    order = WEYL_ORDERS[name]
    v, vT = weyl_scalars(sphere, p)[name], weyl_scalars(sphere, T(list(p)))[name]
    assert vT == pytest.approx(lam ** (-order) * v, rel=1e-8)


def test_slice_distance_from_shifted_base(sphere):
    # base at mu = 2 (x = 2 ln 2): the slices mu = 2 and mu = 3 relative to the origin
    base = [2 * math.log(2.0), 0.0, 0.0]
    sd = lab.slice_distance(sphere, 1.0, 1.5, base)
    assert sd.distance == pytest.approx(2.0, abs=1e-3)
