import math

import numpy as np
import pytest

from hcg import jets as J
from hcg import zoo
from hcg.tensors import DegenerateMetricError, curvature_derivatives, homothety_pullback_residual, ricci


def _push(T, F):
    """Components of the covariant tensor ``T`` on the frame columns of ``F``."""
    for _ in range(T.ndim):
        T = np.tensordot(T, F, axes=([0], [0]))
    return T


def test_oracle_matches_engine():
    for wf in (zoo.walker_exp(), zoo.walker_log(), zoo.walker_pow(3.0), zoo.walker_quad(zoo.alpha_exp)):
        g = zoo.walker_metric(wf)
        p = [0.3, 1.1, -0.4]
        eng = curvature_derivatives(g, p, 2)
        for a, b in zip(eng, zoo.walker_oracle_tensors(wf, p)):
            np.testing.assert_allclose(a.entries, b, rtol=1e-11, atol=1e-11)


@pytest.mark.parametrize(
    "wf",
    [zoo.walker_exp(), zoo.walker_exp(2.0), zoo.walker_log(), zoo.walker_log(-1.0), zoo.walker_pow(3.0), zoo.walker_pow(-1.0)],
    ids=lambda w: w.name,
)
def test_walker_frame_normalizes(wf):
    g = zoo.walker_metric(wf)
    for p in ([0.2, 0.6, 0.1], [-0.5, 1.3, 0.7]):
        fr = zoo.walker_frame(wf, p)
        F = fr.matrix
        np.testing.assert_allclose(F.T @ g.matrix(p) @ F, zoo.WALKER_NULL_GRAM, atol=1e-12)
        assert max(abs(r) for r in fr.relations()) < 1e-14
        R, dR = (t.entries for t in curvature_derivatives(g, p, 1))
        pr, pdr = _push(R, F), _push(dR, F)
        lam = fr.lam
        assert pr[0, 1, 1, 0] == pytest.approx(fr.sign * lam**2, rel=1e-12)
        assert abs(pdr[0, 1, 1, 0, 0]) < 1e-12 * max(1.0, abs(lam) ** 3)
        assert pdr[0, 1, 1, 0, 1] == pytest.approx(fr.sign * lam**3, rel=1e-12)


def test_log_frame_has_negative_lambda_for_negative_curvature():
    fr = zoo.walker_frame(zoo.walker_log(), [0.0, 1.3, 0.0])
    assert fr.sign == -1.0
    assert fr.lam == pytest.approx(-2 / 1.3)


@pytest.mark.parametrize(
    "wf,expect",
    [
        (zoo.walker_exp(), 1.0),
        (zoo.walker_exp(3.0, -1.0), 1.0),
        (zoo.walker_log(), 1.5),
        (zoo.walker_pow(3.0), 0.0),
        (zoo.walker_pow(-1.0), 4.0 / 3.0),
        (zoo.walker_pow(2.5), -1.0),
    ],
    ids=lambda v: getattr(v, "name", str(v)),
)
def test_homothety_invariant_c(wf, expect):
    # exp: 1, log: 3/2, y^eps: (eps - 3)/(eps - 2)
    for y in (0.5, 1.0, 1.7):
        assert zoo.homothety_invariant_c(wf, [0.1, y, 0.0]) == pytest.approx(expect, abs=1e-10)


def test_power_c_formula():
    for eps in (-2.0, -0.5, 0.5, 1.5, 4.0, 7.0):
        c = zoo.homothety_invariant_c(zoo.walker_pow(eps), [0.0, 1.2, 0.0])
        assert c == pytest.approx((eps - 3) / (eps - 2), abs=1e-10)


def test_frame_errors():
    with pytest.raises(zoo.AlphaBranchError):
        zoo.walker_frame(zoo.walker_sym(), [0.0, 1.0, 0.0])
    with pytest.raises(zoo.FlatDirectionError):
        zoo.walker_frame(zoo.WalkerFun(lambda x, y: x * y), [0.0, 1.0, 0.0])
    with pytest.raises(ZeroDivisionError):
        zoo.homothety_invariant_c(zoo.walker_sym(), [0.0, 1.0, 0.0])
    with pytest.raises(zoo.ZooError):
        zoo.walker_alpha_frame(zoo.walker_log(), [0.0, 1.0, 0.0])
    with pytest.raises(zoo.ZooError):
        zoo.walker_pow(2.0)
    assert issubclass(zoo.AlphaBranchError, zoo.ZooError)
    assert zoo.AlphaBranchError.code == "f_yyy_zero"


def test_alpha_frame_power_law_constant():
    wf = zoo.walker_quad(zoo.alpha_inverse_square(1.0, 0.0), domain=lambda x: x != 0)
    g = zoo.walker_metric(wf)
    c1s = []
    for x in (0.5, 1.0, 2.5):
        fr, c1 = zoo.walker_alpha_frame(wf, [x, 0.7, 0.0], c0=1.0)
        F = fr.matrix
        np.testing.assert_allclose(F.T @ g.matrix([x, 0.7, 0.0]) @ F, zoo.WALKER_NULL_GRAM, atol=1e-12)
        dR = curvature_derivatives(g, [x, 0.7, 0.0], 1)[1].entries
        assert _push(dR, F)[0, 1, 1, 0, 0] == pytest.approx(c1, rel=1e-12)
        c1s.append(c1)
    np.testing.assert_allclose(c1s, c1s[0], rtol=1e-12)
    # alpha = e^x is not a power law: c1 drifts
    _, a = zoo.walker_alpha_frame(zoo.walker_quad(zoo.alpha_exp), [0.0, 0.7, 0.0])
    _, b = zoo.walker_alpha_frame(zoo.walker_quad(zoo.alpha_exp), [1.0, 0.7, 0.0])
    assert abs(a - b) > 0.1


def test_explicit_maps():
    samples = [[0.1, 0.8, 0.3], [-1.0, 1.5, 0.4], [0.7, 0.3, -2.0]]
    assert homothety_pullback_residual(zoo.build("walker.exp", a=2.0), zoo.case_i_isometry(2.0, 0.4, 1.0, -1.0), 1.0, samples) <= 1e-10
    assert homothety_pullback_residual(zoo.build("walker.log"), zoo.case_iia_homothety(0.6, 0.2), 0.6, samples) <= 1e-10
    g = zoo.build("walker.pow", eps=3.0)
    assert homothety_pullback_residual(g, zoo.case_iib_homothety(3.0, 1.4, 0.5, 0.5), 1.4, samples) <= 1e-10


def test_shear_map_changes_f_by_derivative():
    # x~ -> x~ + 2 w(x) turns g_f into g_{f - 2 w'}
    wf = zoo.walker_exp()
    target = zoo.walker_metric(zoo.WalkerFun(lambda x, y: J.exp(y) - 2 * J.cos(x)))
    res = homothety_pullback_residual(zoo.walker_metric(wf), zoo.shear_map(J.sin), 1.0, [[0.3, 0.2, 0.1], [1.1, -0.4, 2.0]], target=target)
    assert res <= 1e-12


def test_change_of_variables():
    res = zoo.change_of_variables_check(zoo.walker_exp(), lambda x: x * x, [[0.3, 0.2, 0.1], [-1.0, 0.5, 0.0]])
    assert res.residual <= 1e-10
    assert res.f_yy_residual <= 1e-12


@pytest.mark.parametrize("base", [zoo.sphere_stereographic(), zoo.flat_plane()], ids=["S2", "R2"])
@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 2.0])
def test_warped_ricci_oracle(base, t):
    spec = zoo.QStructureSpec(base, t)
    g = zoo.q_structure_metric(spec)
    p = [0.4, 0.3, -0.6]
    rho, tau = zoo.warped_ricci_oracle(spec, p)
    np.testing.assert_allclose(ricci(g, p).entries, rho.entries, atol=1e-12)
    assert tau == pytest.approx(math.exp(-t * 0.4) * ((2.0 if base.name == "S2" else 0.0) - t * t / 2), abs=1e-14)


def test_theta_flatten():
    spec = zoo.qstruct_flat_theta(1.0, 0.6, 0.0)
    res = zoo.theta_flatten_check(spec, [[0.0, 0.0, 0.0], [0.5, 1.0, -0.3]])
    assert res.rho == pytest.approx(1.25)
    assert res.s == pytest.approx(1.25)
    assert res.residual <= 1e-12
    bad = zoo.QStructureSpec(zoo.flat_plane(), 1.0, theta=lambda y: [0.3 * y[1], 0.0])
    with pytest.raises(zoo.NonKillingError):
        zoo.theta_flatten_check(bad, [[0.0, 0.1, 0.2]])


def test_q_structure_signature_and_degeneracy():
    assert zoo.q_structure_metric(zoo.qstruct_flat_theta(1.0, 0.6)).signature == (0, 3)
    assert zoo.q_structure_metric(zoo.qstruct_flat_theta(1.0, 1.5)).signature == (1, 2)
    with pytest.raises(DegenerateMetricError):
        zoo.q_structure_metric(zoo.qstruct_flat_theta(1.0, 1.0))
    assert zoo.q_structure_determinant(zoo.qstruct_flat_theta(0.0, 0.6), [0.0, 0.0, 0.0]) == pytest.approx(1 - 0.36)


def test_registry():
    assert set(zoo.ZOO) >= {"walker.exp", "walker.log", "walker.pow", "walker.quad", "warped.sphere"}
    with pytest.raises(KeyError, match="available"):
        zoo.build("walker.nope")
    with pytest.raises(KeyError, match="allowed"):
        zoo.build("walker.exp", b=1.0)
    with pytest.raises(zoo.ZooError):
        zoo.walker_function("warped.sphere")
    with pytest.raises(zoo.ZooError):
        zoo.build("walker.quad", alpha="cubic")
    assert zoo.build("warped.flat", t=0.5).coordinates == ("x", "u", "v")
