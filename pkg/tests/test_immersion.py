import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from saddledisk import scale
from saddledisk.circle_pencil import half_extent, radius
from saddledisk.immersion import (
    TransversalityError,
    boundary_curve,
    domain_extent,
    eval_jet,
    eval_psi,
    grid_arrays,
    level_curve,
    piece2_grid,
    sample_grid,
    umbilic_deviation,
)

from helpers import fd_partials as _fd, random_interior as _random_interior, rel_error as _rel

SWAP = np.array([1, 0, 2])


@pytest.mark.parametrize("t", [1.0, 0.5])
def test_derivatives_vs_central_differences(ribbon, t):
    rib = scale(ribbon, t)
    u, v = _random_interior(rib, 500)
    j = eval_jet(rib, u, v)
    du, dv, duu, duv, dvv = _fd(rib, u, v)
    assert _rel(j.du, du) < 1e-6
    assert _rel(j.dv, dv) < 1e-6
    assert _rel(j.duu, duu) < 1e-4
    assert _rel(j.duv, duv) < 1e-4
    assert _rel(j.dvv, dvv) < 1e-4


def test_v_is_arc_length(ribbon):
    u, v = _random_interior(ribbon, 300, seed=1)
    np.testing.assert_allclose(eval_jet(ribbon, u, v).G, 1.0, atol=1e-14)


def test_core_curve_and_boundary(ribbon):
    u = np.linspace(-ribbon.u3, ribbon.u3, 201)
    pos = eval_psi(ribbon, u, 0.0)
    np.testing.assert_allclose(pos[:, :2], ribbon.gamma(u), atol=1e-15)
    assert np.all(pos[:, 2] == 0)
    for side in (1, -1):
        np.testing.assert_allclose(np.linalg.norm(boundary_curve(ribbon, side, u), axis=-1), 1.0, atol=1e-14)
    with pytest.raises(ValueError):
        boundary_curve(ribbon, 0, u)


@settings(max_examples=100, deadline=None)
@given(x=st.floats(-0.99, 0.99), w=st.floats(-0.99, 0.99), t=st.floats(0.05, 1.0))
def test_frame_orientation(ribbon, x, w, t):
    rib = scale(ribbon, t)
    u = x * rib.u3
    j = eval_jet(rib, u, w * domain_extent(rib, u))
    assert np.linalg.norm(j.normal) == pytest.approx(1.0, abs=1e-13)
    assert abs(np.dot(j.normal, j.du)) < 1e-12 and abs(np.dot(j.normal, j.dv)) < 1e-12
    assert np.linalg.det(np.stack([j.du, j.dv, j.normal])) > 0


@settings(max_examples=100, deadline=None)
@given(x=st.floats(-1.0, 1.0), w=st.floats(-1.0, 1.0), t=st.floats(0.05, 1.0))
def test_symmetries(ribbon, x, w, t):
    rib = scale(ribbon, t)
    u = x * rib.u3
    v = w * domain_extent(rib, u)
    p = eval_psi(rib, u, v)
    np.testing.assert_allclose(eval_psi(rib, -u, v), p[SWAP], atol=1e-12)
    np.testing.assert_allclose(eval_psi(rib, u, -v), p * [1, 1, -1], atol=1e-15)


def test_planar_pieces(ribbon):
    u = np.concatenate([np.linspace(-ribbon.u3, -ribbon.u2, 40), np.linspace(ribbon.u2, ribbon.u3, 40)])
    v = 0.7 * domain_extent(ribbon, u)
    j = eval_jet(ribbon, u, v)
    assert set(np.unique(j.piece)) == {1, 3}
    for f in (j.K, j.H, j.L, j.M, j.N2, umbilic_deviation(j)):
        assert np.all(f == 0)
    on1 = j.piece == 1
    np.testing.assert_array_equal(j.pos[on1, 1], 0.0)
    np.testing.assert_array_equal(j.pos[~on1, 0], 0.0)
    np.testing.assert_array_equal(j.normal[on1], np.broadcast_to([0, -1.0, 0], (on1.sum(), 3)))
    np.testing.assert_array_equal(j.normal[~on1], np.broadcast_to([-1.0, 0, 0], ((~on1).sum(), 3)))


def test_corner_columns(ribbon):
    j = eval_jet(ribbon, np.array([ribbon.u3, -ribbon.u3]), 0.0)
    assert np.all(np.isnan(j.dvv[:, 2]))
    assert np.all(j.K == 0)
    np.testing.assert_allclose(j.pos, [[0, -1, 0], [-1, 0, 0]], atol=1e-15)


def test_center_column_normal_in_diagonal_plane(ribbon):
    v = np.linspace(-0.99, 0.99, 51) * domain_extent(ribbon, 0.0)
    n = eval_jet(ribbon, 0.0, v).normal
    assert np.max(np.abs(n[:, 0] - n[:, 1])) < 1e-9


def test_circle_curvature_projection(ribbon):
    # <psi_vv, N> at v = 0 is (1/R) <p_hat, N> with the normal from finite differences
    u = np.linspace(-0.7, 0.7, 15)
    j = eval_jet(ribbon, u, 0.0)
    du, dv, *_ = _fd(ribbon, u, np.zeros_like(u))
    n = np.cross(du, dv)
    n /= np.linalg.norm(n, axis=-1)[:, None]
    g = ribbon.gamma(u)
    rho = np.linalg.norm(g, axis=-1)
    phat = np.concatenate([g / rho[:, None], np.zeros((len(u), 1))], axis=-1)
    expect = np.einsum("ij,ij->i", phat, n) / np.array([radius(r) for r in rho])
    np.testing.assert_allclose(j.N2, expect, rtol=1e-6)


def test_strict_domain(ribbon):
    with pytest.raises(ValueError):
        eval_jet(ribbon, 0.0, 1.01 * domain_extent(ribbon, 0.0))
    eval_jet(ribbon, 0.0, 1.01 * domain_extent(ribbon, 0.0), strict=False)


def test_sample_grid(ribbon):
    pts = sample_grid(ribbon, 3, 3)
    # end columns collapse to a single point each
    assert [p.piece for p in pts] == [1, 2, 2, 2, 3]
    assert len({(p.u, p.v) for p in pts}) == len(pts)
    assert [p.u for p in pts] == sorted(p.u for p in pts)
    U, V, P = grid_arrays(ribbon, 5, 4)
    assert U.shape == V.shape == P.shape == (5, 4)
    with pytest.raises(ValueError):
        grid_arrays(ribbon, 1, 4)


def test_piece2_grid(ribbon):
    U, V = piece2_grid(ribbon, 10, 5)
    assert np.all(np.abs(U) < ribbon.u2)
    np.testing.assert_allclose(np.abs(V[:, 0]), domain_extent(ribbon, U[:, 0]))


def test_level_curve_on_surface(ribbon_half):
    u = np.linspace(-0.7, 0.7, 29)
    for c in (-1.0, -0.3, 0.5, 1.0):
        lc = level_curve(ribbon_half, c, u)
        j = eval_jet(ribbon_half, u, lc.v, strict=False)
        np.testing.assert_allclose(lc.pos, j.pos, atol=1e-14)
        assert np.all(lc.pos[:, 2] == c)
        # tangent to the surface
        assert np.max(np.abs(np.einsum("ij,ij->i", lc.d1, j.normal))) < 1e-12


def test_level_curve_derivatives(ribbon_half):
    u = np.linspace(-0.7, 0.7, 15)
    h = 1e-5
    for c in (0.4, -0.9):
        lc = level_curve(ribbon_half, c, u)
        p = lambda x: level_curve(ribbon_half, c, x).pos
        np.testing.assert_allclose(lc.d1, (p(u + h) - p(u - h)) / (2 * h), atol=1e-8)
        np.testing.assert_allclose(lc.d2, (p(u + h) - 2 * p(u) + p(u - h)) / h**2, atol=1e-4)


def test_level_curve_at_zero_height(ribbon_half):
    u = np.linspace(-0.7, 0.7, 15)
    lc = level_curve(ribbon_half, 0.0, u)
    np.testing.assert_allclose(lc.pos[:, :2], ribbon_half.gamma(u), atol=1e-15)
    np.testing.assert_allclose(lc.signed_curvature, ribbon_half.kappa(u), rtol=1e-12)
    assert np.all(lc.inside_ball)


def test_level_curve_errors(ribbon):
    with pytest.raises(TransversalityError):
        level_curve(ribbon, 1.0, np.linspace(-0.5, 0.5, 11))
    with pytest.raises(ValueError):
        level_curve(ribbon, 0.0, np.array([ribbon.u2]))
    assert isinstance(TransversalityError(), ValueError)


def test_half_extent_matches_domain(ribbon):
    u = np.linspace(-ribbon.u3, ribbon.u3, 9)
    np.testing.assert_allclose(domain_extent(ribbon, u), half_extent(np.linalg.norm(ribbon.gamma(u), axis=-1)))
