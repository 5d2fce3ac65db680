import json
import math

import numpy as np
import pytest

from saddledisk import scale
from saddledisk.immersion import TransversalityError, eval_jet, jet_from_partials
from saddledisk.verifier import (
    CheckResult,
    check_circle_normal_curvature,
    check_free_boundary,
    check_level_curves,
    check_linear_independence,
    check_saddle,
    find_t0,
    saddle_predicate,
    transversality_margin,
    verify,
)


def _flip_normal(rib, u, v, strict=True):
    j = eval_jet(rib, u, v, strict)
    j.normal = -j.normal
    return j


def _pushed_off(rib, u, v):
    j = eval_jet(rib, u, v)
    j.pos = j.pos + 0.01 * j.normal
    return j


def _sphere_jet(rib, u, v):
    # a round sphere of radius 1/2 in the same (u, v) slots: K = 4
    u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    a, b = u / rib.u3 * math.pi, v
    cu, su, cv, sv = np.cos(a), np.sin(a), np.cos(b), np.sin(b)
    r = 0.5
    pos = r * np.stack([cv * cu, cv * su, sv], -1)
    du = r * np.stack([-cv * su, cv * cu, 0 * sv], -1) * (math.pi / rib.u3)
    dv = r * np.stack([-sv * cu, -sv * su, cv], -1)
    duu = r * np.stack([-cv * cu, -cv * su, 0 * sv], -1) * (math.pi / rib.u3) ** 2
    duv = r * np.stack([sv * su, -sv * cu, 0 * sv], -1) * (math.pi / rib.u3)
    dvv = r * np.stack([-cv * cu, -cv * su, -sv], -1)
    return jet_from_partials(u, v, np.full(u.shape, 2), pos, du, dv, duu, duv, dvv)


class _CollinearCurve:
    """Wraps a ribbon but reports gamma' parallel to gamma."""

    def __init__(self, rib):
        self._rib = rib

    def __getattr__(self, name):
        return getattr(self._rib, name)

    def jet(self, u):
        g0, g1, g2 = self._rib.jet(u)
        return g0, 2.0 * g0, g2


# free boundary


@pytest.mark.parametrize("t", [1.0, 0.5, 0.1])
def test_free_boundary_passes(ribbon, t):
    res = check_free_boundary(scale(ribbon, t), 1000)
    assert res.passed and res.worst_residual < 1e-12
    assert res.details["max_sphere"] <= 1e-10


def test_free_boundary_planar_sample(ribbon):
    u = -0.5 * (ribbon.u2 + ribbon.u3)
    from saddledisk.immersion import boundary_curve, domain_extent

    j = eval_jet(ribbon, u, domain_extent(ribbon, u))
    assert j.piece == 1
    assert abs(np.dot(j.normal, j.pos)) <= 1e-12
    np.testing.assert_allclose(boundary_curve(ribbon, 1, u), j.pos)


def test_free_boundary_rejects_pushed_surface(ribbon):
    res = check_free_boundary(ribbon, 1000, jet=_pushed_off)
    assert not res.passed and res.worst_residual > 1e-3


def test_free_boundary_min_samples(ribbon):
    with pytest.raises(ValueError):
        check_free_boundary(ribbon, 10)


# circle normal curvature


@pytest.mark.parametrize("t", [1.0, 0.5, 0.1])
def test_circle_normal_curvature(ribbon, t):
    res = check_circle_normal_curvature(scale(ribbon, t), 200, 200)
    assert res.passed
    assert res.worst_residual > 1e-12
    # the outer columns sit in the flat band and are only sign-certified
    assert 0 < res.details["flat_band_min"] < 1e-12


def test_circle_normal_curvature_rejects_flipped_normal(ribbon):
    res = check_circle_normal_curvature(ribbon, 50, 50, jet=_flip_normal)
    assert not res.passed and res.worst_residual < 0


# level curves


def test_level_curves_small_t(ribbon):
    res = check_level_curves(scale(ribbon, 0.05))
    assert res.passed
    assert res.details["max_normal_product"] < -0.9
    assert res.details["position_mismatch"] < 1e-13


def test_level_curves_zero_height_any_t(ribbon):
    for t in (1.0, 0.5):
        assert check_level_curves(scale(ribbon, t), cs=(0.0,)).passed


def test_level_curves_transversality_breaks_at_t1(ribbon):
    # the default ribbon is not transversal to |c| = 1 at t = 1 (min R < 1)
    assert transversality_margin(ribbon) < 0
    with pytest.raises(TransversalityError):
        check_level_curves(ribbon)


def test_level_curves_reject_flipped_normal(ribbon):
    srib = scale(ribbon, 0.3)
    flipped = lambda r, u, v: _flip_normal(r, u, v, strict=False)
    res = check_level_curves(srib, jet=flipped)
    assert not res.passed
    assert res.details["max_normal_product"] > 0


# saddle


def test_saddle_default_t1_reported(ribbon):
    # this ribbon is already saddle at t = 1 on the grid
    res = check_saddle(ribbon, 200, 200)
    assert res.passed
    assert res.details["saddle_margin"] > 0


def test_saddle_rejects_sphere(ribbon):
    res = check_saddle(ribbon, 30, 30, jet=_sphere_jet)
    assert not res.passed
    assert res.worst_residual == pytest.approx(4.0, rel=1e-9)


def test_saddle_planar_only_zero(ribbon):
    j = eval_jet(ribbon, np.linspace(ribbon.u2, ribbon.u3, 20), 0.3 * 0)
    assert np.max(j.K) == 0


# linear independence


def test_linear_independence(ribbon):
    res = check_linear_independence(ribbon, 1000)
    assert res.passed and res.worst_residual > 1e-10
    u0 = check_linear_independence.__defaults__
    assert u0 == (1000, 1e-3, 1e-10)
    g0, g1, _ = ribbon.jet(0.0)
    assert g0[0] * g1[1] - g0[1] * g1[0] == pytest.approx(ribbon.d * math.sqrt(2), rel=1e-14)


def test_linear_independence_rejects_collinear(ribbon):
    res = check_linear_independence(_CollinearCurve(ribbon), 200)
    assert not res.passed


# t0 search


def test_find_t0_witness(ribbon):
    w = find_t0(ribbon, 60, 60, iters=10)
    assert 0.01 <= w.t0 < 1
    assert w.saddle_margin > 0
    for f in (1, 0.5, 0.25):
        assert saddle_predicate(ribbon, f * w.t0, 60, 60)
    assert all(ok for t, ok in w.tested if t <= w.t0)


def test_find_t0_zero_iters(ribbon):
    assert find_t0(ribbon, 20, 20, t_lo=0.1, iters=0).t0 == 0.1


def test_find_t0_no_witness_coarse(ribbon):
    # at t_lo = 0.9 transversality already fails; a 4x4 grid cannot rescue it
    with pytest.raises(ValueError, match="no saddle witness"):
        find_t0(ribbon, 4, 4, t_lo=0.9)


def test_find_t0_bad_bracket(ribbon):
    with pytest.raises(ValueError):
        find_t0(ribbon, 10, 10, t_lo=0.5, t_hi=0.4)


# reports


def test_report_consistent_and_reproducible(ribbon):
    a = verify(ribbon, 0.5, 60, 60)
    b = verify(ribbon, 0.5, 60, 60)
    assert a.to_json() == b.to_json()
    data = json.loads(a.to_json())
    assert set(data) == {"ribbon", "t", "passed", "checks", "saddle_margin", "t0_witness"}
    assert data["passed"] == all(c["passed"] for c in data["checks"])
    names = [c["name"] for c in data["checks"]]
    assert names == ["free_boundary", "circle_normal_curvature", "level_curves", "saddle", "linear_independence"]
    for c in data["checks"]:
        assert {"name", "passed", "worst_residual", "worst_point", "grid", "tolerance"} <= set(c)


def test_report_t1_records_transversality(ribbon):
    rep = verify(ribbon, 1.0, 40, 40)
    lc = next(c for c in rep.checks if c.name == "level_curves")
    assert not lc.passed and "R =" in lc.details["error"]
    assert not rep.passed
    assert rep.checks[0].name == "free_boundary" and rep.checks[0].passed


def test_grid_refinement_stable(ribbon):
    # doubling from the 200 x 200 working grid
    coarse = verify(ribbon, 0.5, 200, 200)
    fine = verify(ribbon, 0.5, 400, 400)
    for c, f in zip(coarse.checks, fine.checks):
        assert c.passed == f.passed
        if c.worst_residual != 0 or f.worst_residual != 0:
            ratio = f.worst_residual / c.worst_residual
            assert 0.1 < ratio < 10, c.name


def test_check_result_dict():
    r = CheckResult("x", True, 1.0, (0.0,), (1,), 1e-12)
    assert r.to_dict()["details"] == {}


def test_level_curves_t1_transversal_range(ribbon):
    # below min R the t = 1 level curves are convex with the right sign
    assert check_level_curves(ribbon, cs=tuple(np.linspace(-0.42, 0.42, 9))).passed
