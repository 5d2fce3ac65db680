"""Grid certification of the free boundary, curvature and saddle properties.

Every check returns a :class:`CheckResult`.  "For all" claims are checked on
finite grids with margins; nothing here is a proof.

Strict positivity is certified in two regimes.  Where the convex arc still
turns (tail turning at least :data:`~saddledisk.ribbon.FLAT_TURNING`) a
value must clear a fixed floor.  In the flat gluing band every quantity
that vanishes with the curvature is far below any fixed floor, yet is
computed with relative accuracy, so only its sign is asserted there.
Points whose curvature underflows double precision are skipped and counted.

Each check accepts ``jet`` (and the level-curve check also ``level``)
callables so synthetic violations can be fed through the same code path.
"""

from dataclasses import asdict, dataclass, field
import json

import numpy as np

from .immersion import (
    TransversalityError,
    domain_extent,
    eval_jet,
    grid_arrays,
    level_curve,
    piece2_grid,
)
from .ribbon import scale

FLOOR = 1e-12
DEFAULT_CS = tuple(np.linspace(-1.0, 1.0, 9))


def _jet(rib, u, v):
    return eval_jet(rib, u, v)


@dataclass
class CheckResult:
    """Outcome of one check.

    ``worst_residual`` is the extreme value of the checked quantity in the
    resolved band (minimum for lower bounds, maximum for upper bounds);
    flat-band extremes and skip counts go into ``details``.
    """

    name: str
    passed: bool
    worst_residual: float
    worst_point: tuple
    grid: tuple
    tolerance: float
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


@dataclass
class T0Witness:
    t0: float
    saddle_margin: float
    tested: list


@dataclass
class VerificationReport:
    ribbon: dict
    t: float
    checks: list
    saddle_margin: float
    t0_witness: float | None = None

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {
            "ribbon": self.ribbon,
            "t": self.t,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "saddle_margin": self.saddle_margin,
            "t0_witness": self.t0_witness,
        }

    def to_json(self):
        return json.dumps(_plain(self.to_dict()), indent=2, sort_keys=False)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def _point(*coords):
    return tuple(float(c) for c in coords)


def _lower_bound(name, values, band, points, grid, floor=FLOOR, details=None):
    """Two-regime ``values > 0`` certification.

    ``band`` is 0 (resolved), 1 (flat) or 2 (skipped) per value; ``points``
    is a tuple of coordinate arrays of the same shape.
    """
    values = np.asarray(values, dtype=float)
    band = np.broadcast_to(band, values.shape)
    details = dict(details or {})
    res, flat = band == 0, band == 1
    details["skipped_underflow"] = int(np.sum(band == 2))
    if flat.any():
        fv = np.where(flat, values, np.inf)
        details["flat_band_min"] = float(fv.min())
        details["flat_band_points"] = int(flat.sum())
    ok_res = bool(np.all(values[res] > floor))
    ok_flat = bool(np.all(values[flat] > 0.0))
    nan = bool(np.any(np.isnan(values[band < 2])))
    if res.any():
        vv = np.where(res, values, np.inf)
        i = np.unravel_index(int(np.argmin(vv)), values.shape)
        worst = float(values[i])
    else:
        i = np.unravel_index(0, values.shape)
        worst = float("inf")
    if not ok_flat:
        fv = np.where(flat, values, np.inf)
        i = np.unravel_index(int(np.argmin(fv)), values.shape)
    return CheckResult(
        name,
        ok_res and ok_flat and not nan,
        worst,
        _point(*(p[i] for p in points)),
        grid,
        floor,
        details,
    )


def boundary_residuals(pos, normal):
    """``(|<N, psi>|, | |psi| - 1 |)`` at boundary samples."""
    orth = np.abs(np.einsum("...i,...i->...", normal, pos))
    sphere = np.abs(np.linalg.norm(pos, axis=-1) - 1.0)
    return orth, sphere


def check_free_boundary(rib, n=1000, jet=_jet, tol=1e-8):
    """The boundary lies on the unit sphere and meets it orthogonally."""
    if n < 100:
        raise ValueError("n must be >= 100")
    u = np.linspace(-rib.u3, rib.u3, n + 2)[1:-1]
    ext = domain_extent(rib, u)
    U = np.concatenate([u, u])
    V = np.concatenate([ext, -ext])
    j = jet(rib, U, V)
    orth, sphere = boundary_residuals(j.pos, j.normal)
    worst = np.maximum(orth, sphere)
    i = int(np.argmax(worst))
    return CheckResult(
        "free_boundary",
        bool(orth.max() <= tol and sphere.max() <= tol),
        float(worst[i]),
        _point(U[i], V[i]),
        (n, 2),
        tol,
        {"max_orthogonality": float(orth.max()), "max_sphere": float(sphere.max())},
    )


def check_circle_normal_curvature(rib, nu=200, nv=200, jet=_jet, floor=FLOOR):
    """``<psi_vv, N> > 0`` on a tensor grid of the open convex piece."""
    U, V = piece2_grid(rib, nu, nv)
    j = jet(rib, U, V)
    vals = np.einsum("...i,...i->...", j.dvv, j.normal)
    return _lower_bound(
        "circle_normal_curvature", vals, rib.sign_band(U), (U, V), (nu, nv), floor
    )


def transversality_margin(srib):
    """``min R - 1`` over the convex arc; positive iff every ``|c| <= 1`` is transversal."""
    return srib.min_circle_radius() - 1.0


def check_level_curves(srib, cs=DEFAULT_CS, nu=200, jet=None, level=level_curve, floor=FLOOR):
    """Convexity of the level curves and the sign of ``<n_hat, N>``.

    Raises
    ------
    TransversalityError
        If some ``|c|`` reaches the radius of an orthogonal circle.
    """
    u = np.linspace(-srib.u2, srib.u2, nu + 2)[1:-1]
    C, U = np.meshgrid(np.asarray(cs, dtype=float), u, indexing="ij")
    lc = level(srib, C, U)
    if jet is None:
        j = eval_jet(srib, U, lc.v, strict=False)
    else:
        j = jet(srib, U, lc.v)
    pos_err = float(np.max(np.abs(j.pos - lc.pos)))
    sign = np.einsum("...i,...i->...", lc.inner_normal, j.normal)
    band = srib.sign_band(U)
    convex = _lower_bound("level_curves", lc.signed_curvature, band, (U, C), (len(cs), nu), floor)
    i = np.unravel_index(int(np.argmax(sign)), sign.shape)
    sign_ok = bool(np.all(sign < -floor))
    details = {
        "min_signed_curvature": convex.worst_residual,
        "max_normal_product": float(sign[i]),
        "max_normal_product_at": _point(U[i], C[i]),
        "position_mismatch": pos_err,
        "inside_ball_fraction": float(np.mean(lc.inside_ball)),
        **{k: v for k, v in convex.details.items()},
    }
    passed = convex.passed and sign_ok
    worst_point = convex.worst_point if not convex.passed or sign_ok else _point(U[i], C[i])
    return CheckResult(
        "level_curves",
        passed,
        convex.worst_residual,
        worst_point,
        (len(cs), nu),
        floor,
        details,
    )


def check_saddle(rib, nu=200, nv=200, jet=_jet, tol=1e-10):
    """``K <= tol`` on the normalized grid over the whole disk."""
    U, V, _ = grid_arrays(rib, nu, nv)
    j = jet(rib, U, V)
    K = np.where(np.isnan(j.K), -np.inf, j.K)
    i = np.unravel_index(int(np.argmax(K)), K.shape)
    return CheckResult(
        "saddle",
        bool(np.all(j.K[~np.isnan(j.K)] <= tol)) and not np.any(np.isnan(j.K)),
        float(K[i]),
        _point(U[i], V[i]),
        (nu, nv),
        tol,
        {"saddle_margin": saddle_margin(rib, nu, nv, jet)},
    )


def saddle_margin(rib, nu=200, nv=200, jet=_jet):
    """``-max K`` over the piece-2 grid."""
    U, V = piece2_grid(rib, nu, nv)
    return float(-np.max(jet(rib, U, V).K))


def check_linear_independence(rib, n=1000, delta=1e-3, floor=1e-10):
    """``det[gamma, gamma'] > 0`` on ``[-u2 + delta, u2 - delta]``."""
    if n < 100:
        raise ValueError("n must be >= 100")
    u = np.linspace(-rib.u2 + delta, rib.u2 - delta, n)
    g0, g1, _ = rib.jet(u)
    det = g0[:, 0] * g1[:, 1] - g0[:, 1] * g1[:, 0]
    return _lower_bound("linear_independence", det, rib.sign_band(u), (u,), (n,), floor)


def saddle_predicate(rib, t, nu=200, nv=200, cs=DEFAULT_CS):
    """``P(t)``: transversality, level-curve signs and ``K <= 1e-10`` at ``t``."""
    srib = scale(rib, t)
    if transversality_margin(srib) <= FLOOR:
        return False
    try:
        lc = check_level_curves(srib, cs, nu)
    except TransversalityError:
        return False
    return lc.passed and check_saddle(srib, nu, nv).passed


def find_t0(rib, nu=200, nv=200, t_lo=0.01, t_hi=1.0, iters=20, cs=DEFAULT_CS):
    """Bisection for a grid-certified saddle threshold.

    The predicate is not assumed monotone: the returned ``t0`` is the
    largest tested ``t`` at which it held, which is a witness and not a
    supremum.  ``t_hi`` itself is not tested.

    Raises
    ------
    ValueError
        If ``P(t_lo)`` fails or the bracket is invalid.
    """
    if not (0.0 < t_lo < t_hi <= 1.0):
        raise ValueError("need 0 < t_lo < t_hi <= 1")
    tested = []

    def P(t):
        ok = saddle_predicate(rib, t, nu, nv, cs)
        tested.append((float(t), bool(ok)))
        return ok

    if not P(t_lo):
        raise ValueError(f"no saddle witness in range: P({t_lo}) fails on a {nu}x{nv} grid")
    lo, hi = t_lo, t_hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if P(mid):
            lo = mid
        else:
            hi = mid
    best = max(t for t, ok in tested if ok)
    return T0Witness(best, saddle_margin(scale(rib, best), nu, nv), tested)


def verify(rib, t=1.0, nu=200, nv=200, cs=DEFAULT_CS, n_boundary=1000, t0_witness=None):
    """Run every check on ``gamma_t`` and assemble a report."""
    srib = scale(rib, t)
    checks = [
        check_free_boundary(srib, n_boundary),
        check_circle_normal_curvature(srib, nu, nv),
    ]
    tm = transversality_margin(srib)
    try:
        checks.append(check_level_curves(srib, cs, nu))
    except TransversalityError as exc:
        checks.append(
            CheckResult("level_curves", False, float(tm), (), (len(cs), nu), FLOOR, {"error": str(exc)})
        )
    checks.append(check_saddle(srib, nu, nv))
    checks.append(check_linear_independence(srib, n_boundary))
    summary = srib.summary()
    summary["spec"] = rib.spec.to_dict()
    summary["min_circle_radius"] = tm + 1.0
    return VerificationReport(summary, float(t), checks, saddle_margin(srib, nu, nv), t0_witness)
