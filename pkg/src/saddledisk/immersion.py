"""The circle-foliated disk ``psi(u, v) = c_{gamma(u)}(v)`` and its jets.

With ``q(u) = |gamma(u)|**2``, ``m = 2/(1 - q)`` and ``w = 4q/(1 - q)**2``::

    psi = (gamma * lam, S),   lam = 1 + m * C(w, v),   S = S(w, v)

where ``S = v s0(w v**2)`` and ``C = v**2 c0(w v**2)``.  Everything is a
smooth function of ``q``, so the same closed-form chain rule covers the
convex piece and the two planar pieces (including the column through the
origin).  On the planar pieces the normal is the exact plane normal and
the second fundamental form is zero.
"""

from dataclasses import dataclass

import numpy as np

from .circle_pencil import bending, c0, half_extent, s0


class TransversalityError(ValueError):
    """A horizontal plane ``x3 = c`` is not cut transversally (``R <= |c|``)."""


@dataclass(frozen=True)
class DomainPoint:
    u: float
    v: float
    piece: int


@dataclass
class SurfaceJet:
    """Second-order jet of ``psi`` with derived curvature data.

    Vector fields carry a trailing axis of length 3; scalar fields have the
    broadcast shape of ``(u, v)``.  ``N2`` is the ``<psi_vv, normal>``
    coefficient.  At the two collapsed corners ``u = +-u3`` the circle has
    zero radius and ``dvv`` is NaN.
    """

    u: np.ndarray
    v: np.ndarray
    piece: np.ndarray
    pos: np.ndarray
    du: np.ndarray
    dv: np.ndarray
    duu: np.ndarray
    duv: np.ndarray
    dvv: np.ndarray
    normal: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N2: np.ndarray
    K: np.ndarray
    H: np.ndarray
    k1: np.ndarray
    k2: np.ndarray


@dataclass
class LevelCurvePoint:
    """Point of the level curve ``Gamma_(t,c) = Sigma^(2) cap {x3 = c}``.

    ``v`` is the preimage on the circle through ``gamma_t(u)``.  When
    ``inside_ball`` is False the point lies on the analytic continuation of
    the circle beyond the unit sphere.
    """

    u: np.ndarray
    c: np.ndarray
    v: np.ndarray
    pos: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    signed_curvature: np.ndarray
    inner_normal: np.ndarray
    inside_ball: np.ndarray


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def _chain_q(q, q_u, q_uu):
    """``(m, m_u, m_uu, w, w_u, w_uu, m_q, w_q, m_qq, w_qq)`` along ``u``."""
    m, w = bending(q)
    m_q = 0.5 * m * m
    m_qq = 0.5 * m**3
    w_q = m * m + q * m**3
    w_qq = 2.0 * m**3 + 1.5 * q * m**4
    m_u = m_q * q_u
    m_uu = m_qq * q_u**2 + m_q * q_uu
    w_u = w_q * q_u
    w_uu = w_qq * q_u**2 + w_q * q_uu
    return m, m_u, m_uu, w, w_u, w_uu


def _family(series, p, w, w_u, w_uu, v):
    """``F = v**p f(w v**2)`` and its partials in ``(u, v)`` through ``w(u)``."""
    y = w * v * v
    f, f1, f2 = series(y)
    vp = v**p
    F = vp * f
    F_w = vp * v * v * f1
    F_ww = vp * v**4 * f2
    F_v = p * v ** (p - 1) * f + 2.0 * w * vp * v * f1
    F_wv = (p + 2) * vp * v * f1 + 2.0 * w * vp * v**3 * f2
    lead = p * (p - 1) * v ** (p - 2) * f if p >= 2 else 0.0
    F_vv = lead + 2.0 * w * (2 * p + 1) * vp * f1 + 4.0 * w * w * vp * v * v * f2
    return F, F_w * w_u, F_v, F_ww * w_u**2 + F_w * w_uu, F_wv * w_u, F_vv


def domain_extent(rib, u):
    """Half length ``v_{gamma(u)}`` of the ``v``-interval over ``u``."""
    g = rib.gamma(u)
    return half_extent(np.clip(np.linalg.norm(g, axis=-1), 0.0, 1.0))


def _raw_jet(g, g1, g2, v):
    """Partials of ``psi`` from the curve jet; ``v`` broadcast against ``g``."""
    q = _dot(g, g)
    q_u = 2.0 * _dot(g, g1)
    q_uu = 2.0 * (_dot(g1, g1) + _dot(g, g2))
    corner = q >= 1.0
    qs = np.where(corner, 0.0, q)
    m, m_u, m_uu, w, w_u, w_uu = _chain_q(qs, q_u, q_uu)
    S, S_u, S_v, S_uu, S_uv, S_vv = _family(s0, 1, w, w_u, w_uu, v)
    C, C_u, C_v, C_uu, C_uv, C_vv = _family(c0, 2, w, w_u, w_uu, v)
    lam = 1.0 + m * C
    lam_u = m_u * C + m * C_u
    lam_v = m * C_v
    lam_uu = m_uu * C + 2.0 * m_u * C_u + m * C_uu
    lam_uv = m_u * C_v + m * C_uv
    lam_vv = m * C_vv

    def vec(h, z):
        return np.concatenate([h, np.asarray(z)[..., None] * np.ones(h.shape[:-1] + (1,))], axis=-1)

    e = lambda x: np.asarray(x)[..., None]
    pos = vec(g * e(lam), S)
    du = vec(g1 * e(lam) + g * e(lam_u), S_u)
    dv = vec(g * e(lam_v), S_v)
    duu = vec(g2 * e(lam) + 2.0 * g1 * e(lam_u) + g * e(lam_uu), S_uu)
    duv = vec(g1 * e(lam_v) + g * e(lam_uv), S_uv)
    dvv = vec(g * e(lam_vv), S_vv)
    if np.any(corner):
        c = corner
        pos = np.where(e(c), vec(g, 0.0 * q), pos)
        du = np.where(e(c), vec(g1, 0.0 * q), du)
        dv = np.where(e(c), np.array([0.0, 0.0, 1.0]), dv)
        duu = np.where(e(c), vec(g2, 0.0 * q), duu)
        duv = np.where(e(c), 0.0, duv)
        dvv = np.where(e(c), np.nan, dvv)
    return pos, du, dv, duu, duv, dvv


def _principal(K, H):
    disc = np.sqrt(np.maximum(H * H - K, 0.0))
    big = np.where(H >= 0, H + disc, H - disc)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big != 0, K / big, 0.0)
    k1 = np.maximum(big, small)
    k2 = np.minimum(big, small)
    return k1, k2


def eval_jet(rib, u, v, strict=True):
    """Second-order jet of the immersion at ``(u, v)`` (arrays broadcast).

    ``strict=False`` allows ``|v|`` beyond the disk, evaluating the analytic
    continuation of each circle.

    Raises
    ------
    ValueError
        If ``strict`` and ``(u, v)`` is outside the parameter disk.
    """
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    g, g1, g2 = rib.jet(u)
    if strict:
        ext = half_extent(np.clip(np.linalg.norm(g, axis=-1), 0.0, 1.0))
        if np.any(np.abs(v) > ext * (1.0 + 1e-12) + 1e-15):
            raise ValueError("(u, v) outside the parameter disk")
    piece = rib.piece(u)
    pos, du, dv, duu, duv, dvv = _raw_jet(g, g1, g2, v)
    planar = (piece != 2)[..., None]
    # pieces 1 and 3 lie in the planes y = 0 and x = 0
    axis = np.where(piece == 1, 1, 0)
    zero_out = planar & (np.arange(3) == axis[..., None])
    pos, du, dv, duu, duv = (np.where(zero_out, 0.0, x) for x in (pos, du, dv, duu, duv))
    dvv = np.where(zero_out & ~np.isnan(dvv), 0.0, dvv)
    cross = np.cross(du, dv)
    sign = np.where(np.take_along_axis(cross, axis[..., None], -1)[..., 0] >= 0, 1.0, -1.0)
    plane_n = np.where(np.arange(3) == axis[..., None], sign[..., None], 0.0)
    return jet_from_partials(
        u, v, piece, pos, du, dv, duu, duv, dvv, planar=piece != 2, plane_normal=plane_n
    )


def jet_from_partials(u, v, piece, pos, du, dv, duu, duv, dvv, planar=False, plane_normal=None):
    """Assemble a :class:`SurfaceJet` from position and partial derivatives.

    The normal is ``du x dv`` normalized.  Where ``planar`` is set the normal
    is ``plane_normal`` and the second fundamental form is taken as zero.
    """
    planar = np.broadcast_to(np.asarray(planar, dtype=bool), np.shape(u))
    cross = np.cross(du, dv)
    nrm = np.linalg.norm(cross, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        normal = cross / nrm[..., None]
    if plane_normal is not None:
        normal = np.where(planar[..., None], plane_normal, normal)
    E, F, G = _dot(du, du), _dot(du, dv), _dot(dv, dv)
    L = np.where(planar, 0.0, _dot(duu, normal))
    M = np.where(planar, 0.0, _dot(duv, normal))
    N2 = np.where(planar, 0.0, _dot(np.nan_to_num(dvv), normal))
    det1 = E * G - F * F
    with np.errstate(invalid="ignore", divide="ignore"):
        K = np.where(planar, 0.0, (L * N2 - M * M) / det1)
        H = np.where(planar, 0.0, (E * N2 - 2.0 * F * M + G * L) / (2.0 * det1))
    k1, k2 = _principal(K, H)
    return SurfaceJet(u, v, piece, pos, du, dv, duu, duv, dvv, normal, E, F, G, L, M, N2, K, H, k1, k2)


def eval_psi(rib, u, v, strict=True):
    return eval_jet(rib, u, v, strict).pos


def umbilic_deviation(jet):
    """``|k1 - k2|``; zero exactly at umbilic points."""
    return np.abs(jet.k1 - jet.k2)


def grid_arrays(rib, nu, nv):
    """Normalized tensor grid ``(u_i, w_j * v(u_i))`` over the whole disk.

    Returns ``(u, v, piece)`` of shape ``(nu, nv)``; the two end columns
    have extent zero and repeat a single point.
    """
    if nu < 2 or nv < 2:
        raise ValueError("nu and nv must be >= 2")
    u = np.linspace(-rib.u3, rib.u3, nu)
    wgt = np.linspace(-1.0, 1.0, nv)
    ext = domain_extent(rib, u)
    ext[[0, -1]] = 0.0
    U = np.repeat(u[:, None], nv, axis=1)
    V = ext[:, None] * wgt[None, :]
    return U, V, rib.piece(U)


def sample_grid(rib, nu, nv):
    """List of distinct :class:`DomainPoint` on the normalized grid, row-major."""
    U, V, P = grid_arrays(rib, nu, nv)
    out = []
    for i in range(nu):
        seen = set()
        for j in range(nv):
            key = float(V[i, j])
            if key in seen:
                continue
            seen.add(key)
            out.append(DomainPoint(float(U[i, j]), key, int(P[i, j])))
    return out


def piece2_grid(rib, nu, nv):
    """Tensor grid on the open convex piece, ``u`` uniform without endpoints."""
    u = np.linspace(-rib.u2, rib.u2, nu + 2)[1:-1]
    wgt = np.linspace(-1.0, 1.0, nv)
    ext = domain_extent(rib, u)
    U = np.repeat(u[:, None], nv, axis=1)
    return U, ext[:, None] * wgt[None, :]


def boundary_curve(rib, side, u):
    """Boundary point ``psi(u, side * v_{gamma(u)})`` on the unit sphere."""
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    u = np.asarray(u, dtype=float)
    return eval_psi(rib, u, side * domain_extent(rib, u))


def level_curve(srib, c, u):
    """Level curve ``Gamma_(t,c)(u)`` of the convex piece with derivatives in ``u``.

    ``c`` and ``u`` broadcast.  Signed curvature is positive on the side
    that ``gamma`` turns toward; at ``c = 0`` the curve is ``gamma_t`` itself.

    Raises
    ------
    TransversalityError
        If ``R_{gamma_t}(u) <= |c|`` somewhere.
    """
    c, u = np.broadcast_arrays(np.asarray(c, dtype=float), np.asarray(u, dtype=float))
    if np.any(np.abs(u) >= srib.u2):
        raise ValueError("level curves are extracted on the open convex piece only")
    g, g1, g2 = srib.jet(u)
    q = _dot(g, g)
    q_u = 2.0 * _dot(g, g1)
    q_uu = 2.0 * (_dot(g1, g1) + _dot(g, g2))
    m, w = bending(q)
    m_q, m_qq = 0.5 * m * m, 0.5 * m**3
    w_q = m * m + q * m**3
    w_qq = 2.0 * m**3 + 1.5 * q * m**4
    c2 = c * c
    arg = 1.0 - c2 * w
    if np.any(arg <= 0):
        i = np.unravel_index(np.argmin(arg), arg.shape)
        raise TransversalityError(
            f"R = {1 / np.sqrt(w[i]):.6g} <= |c| = {abs(c[i]):.6g} at u = {u[i]:.6g}"
        )
    sig = np.sqrt(arg)
    sig_q = -c2 * w_q / (2.0 * sig)
    sig_qq = -c2 * w_qq / (2.0 * sig) - c2 * c2 * w_q**2 / (4.0 * sig**3)
    D = 1.0 + sig
    h = c2 * m / D
    h_q = c2 * (m_q / D - m * sig_q / D**2)
    h_qq = c2 * (m_qq / D - 2.0 * m_q * sig_q / D**2 + 2.0 * m * sig_q**2 / D**3 - m * sig_qq / D**2)
    lam = 1.0 + h
    lam_u = h_q * q_u
    lam_uu = h_qq * q_u**2 + h_q * q_uu
    e = lambda x: x[..., None]
    p2 = g * e(lam)
    d1 = g1 * e(lam) + g * e(lam_u)
    d2 = g2 * e(lam) + 2.0 * g1 * e(lam_u) + g * e(lam_uu)
    speed = np.linalg.norm(d1, axis=-1)
    curv = (d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]) / speed**3
    inner = np.stack([-d1[..., 1], d1[..., 0]], axis=-1) / e(speed)
    k = np.sqrt(w)
    x = c * k
    with np.errstate(invalid="ignore", divide="ignore"):
        v = np.where(x != 0, np.arcsin(x) / np.where(k > 0, k, 1.0), c)
    zeros = np.zeros_like(c)
    pos = np.concatenate([p2, e(c)], axis=-1)
    inside = np.abs(v) <= half_extent(np.sqrt(q))
    return LevelCurvePoint(
        u=u,
        c=c,
        v=v,
        pos=pos,
        d1=np.concatenate([d1, e(zeros)], axis=-1),
        d2=np.concatenate([d2, e(zeros)], axis=-1),
        signed_curvature=curv,
        inner_normal=np.concatenate([inner, e(zeros)], axis=-1),
        inside_ball=inside,
    )
