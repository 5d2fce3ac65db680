"""Ribbon curves: construction, evaluation, validation and homothety.

A ribbon is a planar arc-length curve ``gamma: [-u3, u3] -> D^2`` made of
the segment ``[-1, a] x {0}``, a strictly convex arc in the open positive
quadrant turning by ``3*pi/2``, and the segment ``{0} x [-1, a]``.  It is
symmetric under ``swap(x, y) = (y, x)``: ``swap(gamma(u)) = gamma(-u)``.

The convex arc is generated from a curvature profile

    kappa(u) = A * exp(-s / (1 - (u/u2)**4)**q),   |u| < u2,

which is smooth, even, and vanishes to infinite order at ``u = +-u2`` so
the arc glues onto the straight segments in a ``C^inf`` way.  ``A`` is fixed
by the total turning.

Only the half ``0 <= u <= u2`` is tabulated.  There the tangent angle is
written as ``theta = 3*pi/2 - eps(u)`` with the tail turning
``eps(u) = int_u^u2 kappa``, and the position as tail integrals of
``sin(eps)`` and ``cos(eps)``.  The other half follows from the swap
symmetry, which therefore holds exactly.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._panels import PanelGrid

TURNING = 1.5 * math.pi
_HALF_TURNING = 0.75 * math.pi

#: Tail turning below which a point counts as part of the flat gluing band.
FLAT_TURNING = 1e-6

#: Profile exponent beyond which kappa underflows; such points are unresolvable.
UNDERFLOW_EXPONENT = 700.0

# exponent levels beyond this underflow to zero in exp()
_EXP_CUTOFF = 800.0


class ValidationFailure(Exception):
    """A property of the ribbon definition does not hold numerically."""

    def __init__(self, property, worst_point, residual, message=""):
        self.property = property
        self.worst_point = worst_point
        self.residual = residual
        text = f"ribbon property '{property}' violated at u={worst_point!r} (residual {residual!r})"
        if message:
            text += f": {message}"
        super().__init__(text)


@dataclass(frozen=True)
class RibbonSpec:
    """Parameters of a ribbon.

    Attributes
    ----------
    u2 : float
        Arc-length half extent of the convex part.
    s : float
        Sharpness of the curvature roll-off near ``+-u2``.
    q : float
        Exponent of the roll-off, ``q >= 1``.
    quadrature_n : int
        Number of uniform panels on ``[0, u2]`` (more are added in the
        flat band automatically).
    """

    u2: float = 0.8
    s: float = 1.0
    q: float = 1.0
    quadrature_n: int = 64

    def __post_init__(self):
        for name in ("u2", "s", "q"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
                raise ValueError(f"{name} must be a finite number, got {val!r}")
        if isinstance(self.quadrature_n, bool) or not isinstance(self.quadrature_n, int):
            raise ValueError(f"quadrature_n must be an integer, got {self.quadrature_n!r}")
        if self.u2 <= 0:
            raise ValueError(f"u2 must be positive, got {self.u2}")
        if self.s <= 0:
            raise ValueError(f"s must be positive, got {self.s}")
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.quadrature_n < 64:
            raise ValueError(f"quadrature_n must be >= 64, got {self.quadrature_n}")

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - {"u2", "s", "q", "quadrature_n"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self):
        return {"u2": self.u2, "s": self.s, "q": self.q, "quadrature_n": self.quadrature_n}


def profile_exponent(x, s, q):
    """``s / (1 - x**4)**q`` for ``|x| < 1`` and ``inf`` elsewhere."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = s / (1.0 - x**4) ** q
    return np.where(np.abs(x) < 1.0, out, np.inf)


def _panel_breaks(spec):
    # uniform bulk panels plus exponent level sets, so that kappa changes by
    # at most a factor e**2 across each panel in the flat band
    bulk = np.linspace(0.0, 1.0, spec.quadrature_n + 1)
    levels = np.arange(spec.s + 2.0, _EXP_CUTOFF, 2.0)
    flat = (1.0 - (spec.s / levels) ** (1.0 / spec.q)) ** 0.25
    x = np.union1d(bulk, flat)
    x = x[np.concatenate([[True], np.diff(x) > 1e-13])]
    x[-1] = 1.0
    return spec.u2 * x


class _RibbonCurve:
    """Evaluators shared by :class:`Ribbon` and :class:`ScaledRibbon`.

    Subclasses provide ``base`` (the unscaled :class:`Ribbon`), ``t`` and
    ``u3``.
    """

    @property
    def u2(self):
        return self.base.u2

    @property
    def a_t(self):
        """Height of the junction point ``(0, t*a)``."""
        return self.t * self.base.a

    def _check_domain(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(np.abs(u) > self.u3) or np.any(~np.isfinite(u)):
            raise ValueError(f"u outside [-u3, u3] = [{-self.u3}, {self.u3}]")
        return u

    def piece(self, u):
        """Piece tag: 1 on ``u <= -u2``, 3 on ``u >= u2``, 2 in between."""
        u = np.asarray(u, dtype=float)
        return np.where(u <= -self.u2, 1, np.where(u >= self.u2, 3, 2))

    def jet(self, u):
        """``(gamma, gamma', gamma'')`` at ``u``, each of shape ``u.shape + (2,)``."""
        u = self._check_domain(u)
        t = self.t
        g0, g1, g2 = self.base._convex_jet(np.clip(u, -self.u2, self.u2))
        g0, g1, g2 = t * g0, t * g1, t * g2
        right = (u > self.u2)[..., None]
        left = (u < -self.u2)[..., None]
        zero = np.zeros_like(u)
        seg_r = np.stack([zero, -1.0 + t * (self.u3 - u)], axis=-1)
        seg_l = np.stack([-1.0 + t * (self.u3 + u), zero], axis=-1)
        g0 = np.where(right, seg_r, np.where(left, seg_l, g0))
        d_r = np.array([0.0, -t])
        d_l = np.array([t, 0.0])
        g1 = np.where(right, d_r, np.where(left, d_l, g1))
        g2 = np.where(right | left, 0.0, g2)
        return g0, g1, g2

    def gamma(self, u, order=0):
        """Position (order 0) or the first/second derivative of the curve."""
        if order not in (0, 1, 2):
            raise ValueError("order must be 0, 1 or 2")
        return self.jet(u)[order]

    def kappa(self, u):
        """Signed curvature of the traced curve (``kappa_base / t`` on the arc)."""
        u = self._check_domain(u)
        return self.base._kappa_arc(u) / self.t

    def theta(self, u):
        """Tangent angle in radians, 0 on the first segment, ``3*pi/2`` on the last."""
        u = self._check_domain(u)
        ax = np.minimum(np.abs(u), self.u2)
        eps = self.base._eps(ax)
        return np.where(u >= 0, TURNING - eps, eps)

    def tail_turning(self, u):
        """Turning left between ``u`` and the nearer end of the arc."""
        u = self._check_domain(u)
        return self.base._eps(np.minimum(np.abs(u), self.u2))

    def in_flat_band(self, u):
        return self.tail_turning(u) < FLAT_TURNING

    def resolvable(self, u):
        """False where the curvature profile underflows double precision."""
        x = np.asarray(u, dtype=float) / self.u2
        return profile_exponent(x, self.base.spec.s, self.base.spec.q) < UNDERFLOW_EXPONENT

    def sign_band(self, u):
        """Certification band per point: 0 resolved, 1 flat, 2 unresolvable.

        In the resolved band strict signs need a fixed floor; in the flat
        band the values are accurate in a relative sense and only their
        sign is asserted; beyond underflow nothing can be asserted.
        """
        u = np.asarray(u, dtype=float)
        band = np.where(self.in_flat_band(u), 1, 0)
        return np.where(self.resolvable(u) | (np.abs(u) >= self.u2), band, 2)

    def log_kappa(self, u):
        """``log(kappa_base)``, finite on the open arc even where kappa underflows."""
        x = np.asarray(u, dtype=float) / self.u2
        return math.log(self.base.A) - profile_exponent(x, self.base.spec.s, self.base.spec.q)

    def max_radius(self, n=4001):
        """Maximum of ``|gamma(u)|`` over the convex arc."""
        from scipy.optimize import minimize_scalar

        u = np.linspace(0.0, self.u2, n)
        r = np.linalg.norm(self.gamma(u), axis=-1)
        i = int(np.argmax(r))
        lo, hi = u[max(i - 1, 0)], u[min(i + 1, n - 1)]
        if hi - lo > 0:
            res = minimize_scalar(
                lambda x: -float(np.linalg.norm(self.gamma(x))),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-13},
            )
            return max(float(r[i]), -float(res.fun))
        return float(r[i])

    def min_circle_radius(self):
        """Smallest radius of the orthogonal circles over the convex arc."""
        rho = self.max_radius()
        return 0.5 * (1.0 / rho - rho)

    def summary(self):
        base = self.base
        return {
            "u1": base.u1,
            "u2": base.u2,
            "u3": self.u3,
            "a": self.a_t,
            "d": self.t * base.d,
            "turning": base.turning,
        }


class Ribbon(_RibbonCurve):
    """A realized ribbon (arc-length parametrized, ``t = 1``).

    Use :func:`build_ribbon` to construct and validate one.
    """

    t = 1.0

    def __init__(self, spec, degree=20):
        self.spec = spec
        self.grid = PanelGrid(_panel_breaks(spec), degree)
        nodes = self.grid.nodes
        b = np.exp(-profile_exponent(nodes / spec.u2, spec.s, spec.q))
        bulk = self.grid.tail(b)
        # normalize the half turning to 3*pi/4
        self.A = _HALF_TURNING / float(bulk(0.0))
        self._eps_tab = self.grid.tail(self.A * b)
        eps_nodes = self._eps_tab.at_nodes()
        self._sin_tab = self.grid.tail(np.sin(eps_nodes))
        self._cos_tab = self.grid.tail(np.cos(eps_nodes))
        self.d = float(self._sin_tab(0.0))
        self.a = self.d - float(self._cos_tab(0.0))
        self.u1 = spec.u2 / 10.0
        self.u3 = spec.u2 + 1.0 + self.a
        self.turning = 2.0 * float(self._eps_tab(0.0))

    @property
    def base(self):
        return self

    @property
    def u2(self):
        return self.spec.u2

    def _eps(self, x):
        return self._eps_tab(x)

    def _kappa_arc(self, u):
        x = np.asarray(u, dtype=float) / self.spec.u2
        return self.A * np.exp(-profile_exponent(x, self.spec.s, self.spec.q))

    def _convex_jet(self, u):
        """Unscaled jet on ``[-u2, u2]`` from the half tables and symmetry."""
        u = np.asarray(u, dtype=float)
        x = np.abs(u)
        eps = self._eps_tab(x)
        kap = self._kappa_arc(x)
        se, ce = np.sin(eps), np.cos(eps)
        g0 = np.stack([self._sin_tab(x), self.a + self._cos_tab(x)], axis=-1)
        g1 = np.stack([-se, -ce], axis=-1)
        g2 = np.stack([kap * ce, -kap * se], axis=-1)
        neg = (u < 0)[..., None]
        g0 = np.where(neg, g0[..., ::-1], g0)
        g1 = np.where(neg, -g1[..., ::-1], g1)
        g2 = np.where(neg, g2[..., ::-1], g2)
        return g0, g1, g2


class ScaledRibbon(_RibbonCurve):
    """The ribbon ``gamma_t``: convex arc scaled by ``t``, segments re-extended.

    The parameter runs at constant speed ``t`` along the whole curve, so the
    segments end at ``u3_t = u2 + (1 + t*a)/t``.
    """

    def __init__(self, base, t):
        if not (0.0 < t <= 1.0):
            raise ValueError(f"t must lie in (0, 1], got {t}")
        self.base = base
        self.t = float(t)
        self.u3 = base.u2 + (1.0 + self.t * base.a) / self.t

    @property
    def spec(self):
        return self.base.spec


def scale(r, t):
    """Homothety deformation ``gamma_t`` of a ribbon."""
    base = r.base if isinstance(r, ScaledRibbon) else r
    return ScaledRibbon(base, t)


def eval_gamma(r, u, order=0):
    return r.gamma(u, order)


def kappa_of(r, u):
    return r.kappa(u)


def _fail(prop, u, residual, msg=""):
    raise ValidationFailure(prop, float(u), float(residual), msg)


def validate(r, n=1000, floor=1e-12, tol=1e-9):
    """Check every property of the ribbon definition on grids.

    Strict signs are certified as ``value > floor`` where the arc still
    turns (tail turning >= ``FLAT_TURNING``) and as ``value > 0`` in the
    flat gluing band, where every such quantity is below any fixed floor.

    Raises
    ------
    ValidationFailure
        Naming the first violated property.
    """
    u2 = r.u2
    u = np.linspace(-u2, u2, n + 2)[1:-1]
    band = r.sign_band(u)
    u = u[band < 2]
    flat = band[band < 2] == 1
    g0, g1, g2 = r.jet(u)

    if not (r.base.d > 0):
        _fail("d_positive", 0.0, r.base.d, "gamma(0) must lie in the open quadrant")

    # containment in the open quadrant and the open unit disk
    for comp, name in ((0, "x"), (1, "y")):
        vals = g0[:, comp]
        bad = np.where(flat, vals <= 0, vals <= floor)
        if bad.any():
            i = int(np.argmax(bad))
            _fail("containment", u[i], vals[i], f"{name}-coordinate not positive")
    rad = np.linalg.norm(g0, axis=-1)
    if np.any(rad >= 1.0 - floor):
        i = int(np.argmax(rad))
        _fail("containment", u[i], rad[i], "arc leaves the open unit disk")

    if not (0.0 < r.a_t < 1.0):
        _fail("segment_height", u2, r.a_t, "a must lie in (0, 1)")

    # arc length, from the tangent evaluator and from positions
    speed = np.linalg.norm(g1, axis=-1) / r.t
    if np.max(np.abs(speed - 1.0)) > tol:
        i = int(np.argmax(np.abs(speed - 1.0)))
        _fail("arc_length", u[i], speed[i] - 1.0)
    h = 1e-3 * u2
    uu = np.linspace(-r.u3 + 2 * h, r.u3 - 2 * h, 401)
    p = [r.gamma(uu + k * h) for k in (-2, -1, 1, 2)]
    fd = (p[0] - 8 * p[1] + 8 * p[2] - p[3]) / (12 * h)
    err = np.abs(np.linalg.norm(fd, axis=-1) / r.t - 1.0)
    if err.max() > 1e-8:
        i = int(np.argmax(err))
        _fail("arc_length", uu[i], err[i], "finite-difference speed")

    # swap symmetry
    sym = np.max(np.abs(r.gamma(-u)[:, ::-1] - g0), axis=-1)
    if sym.max() > tol:
        i = int(np.argmax(sym))
        _fail("symmetry", u[i], sym[i])

    # segments and endpoints
    ends = r.gamma(np.array([r.u3, -r.u3, u2, -u2]))
    expect = np.array([[0.0, -1.0], [-1.0, 0.0], [0.0, r.a_t], [r.a_t, 0.0]])
    dev = np.max(np.abs(ends - expect))
    if dev > tol:
        _fail("segments", r.u3, dev)
    if abs(r.u3 - (u2 + (1.0 + r.a_t) / r.t)) > tol:
        _fail("segments", r.u3, r.u3 - u2)

    # turning
    turn = float(r.theta(u2) - r.theta(-u2))
    if abs(turn - TURNING) > tol:
        _fail("turning", u2, turn - TURNING)

    # positive curvature, flat gluing
    ul = np.linspace(-u2, u2, n + 2)[1:-1]
    logk = r.log_kappa(ul)
    if not np.all(np.isfinite(logk)):
        i = int(np.argmax(~np.isfinite(logk)))
        _fail("curvature_positive", ul[i], logk[i])
    edge = u2 - np.logspace(-2, -6, 9) * u2
    # kappa = o(h**k) for every k: kappa / h**8 must eventually fall below 1
    ratio = r.log_kappa(edge) - 8.0 * np.log(u2 - edge)
    if not (ratio[-1] < ratio[-2] and ratio[-1] < 0):
        _fail("flat_gluing", edge[-1], ratio[-1])
    if np.any(r.kappa(np.array([u2, -u2, r.u3, -r.u3])) != 0):
        _fail("flat_gluing", u2, float(r.kappa(u2)))

    # strictly decreasing curvature on (u1, u2), checked on log kappa
    ud = np.linspace(r.base.u1, u2, n + 1)[:-1]
    steps = np.diff(r.log_kappa(ud))
    if np.any(steps >= 0):
        i = int(np.argmax(steps >= 0))
        _fail("curvature_decreasing", ud[i], steps[i])
    kd = np.diff(r.kappa(ud))
    if np.any(kd > 0):
        i = int(np.argmax(kd > 0))
        _fail("curvature_decreasing", ud[i], kd[i])

    # gamma and gamma' independent (det > 0 for the counterclockwise arc)
    det = g0[:, 0] * g1[:, 1] - g0[:, 1] * g1[:, 0]
    bad = np.where(flat, det <= 0, det <= floor)
    if bad.any():
        i = int(np.argmax(bad))
        _fail("linear_independence", u[i], det[i])

    # embeddedness of the convex arc
    m = 600
    ue = np.linspace(-u2, u2, m)
    pe = r.gamma(ue)
    dist = np.linalg.norm(pe[:, None, :] - pe[None, :, :], axis=-1)
    sep = np.abs(ue[:, None] - ue[None, :])
    delta = 4 * (ue[1] - ue[0])
    far = sep > delta
    closest = dist[far].min()
    if closest <= 0.5 * delta * r.t:
        i = int(np.argwhere(far & (dist == closest))[0, 0])
        _fail("embedded", ue[i], closest)
    return r


def build_ribbon(spec, degree=20):
    """Construct the ribbon of ``spec`` and validate it.

    Raises
    ------
    ValidationFailure
        If any property of the ribbon definition fails.
    """
    r = Ribbon(spec, degree)
    validate(r)
    return r
