"""Circles orthogonal to the horizontal disk and to the unit sphere.

For ``p`` in the horizontal unit disk, ``c_p`` is the circle in the vertical
plane through ``0`` and ``p`` that passes through ``p`` vertically and meets
the unit sphere at right angles.  With ``rho = |p|`` its radius is
``R = (1/rho - rho)/2`` and its center is ``(p/rho)(rho + R)``.  For
``p = 0`` it degenerates to the vertical segment ``{0} x {0} x [-1, 1]``.

Parametrized by arc length ``v`` with ``c_p(0) = p`` and ``c_p'(0) = e3``::

    c_p(v) = p * (1 + m * v**2 * c0(k**2 v**2)) + e3 * v * s0(k**2 v**2)

where ``k = 1/R``, ``m = 2/(1 - rho**2)`` and ``s0``, ``c0`` are the entire
functions ``sin(x)/x`` and ``(1 - cos x)/x**2`` of ``x**2``.  Written this
way the formula depends on ``rho`` only through ``rho**2`` and stays exact
and cancellation-free down to ``p = 0``.
"""

import math

import numpy as np

_NTERMS = 24


def _series_coeffs(offset):
    # sum_n (-y)**n / (2n + offset)!
    return np.array([(-1.0) ** n / math.factorial(2 * n + offset) for n in range(_NTERMS)])


_S0 = _series_coeffs(1)
_C0 = _series_coeffs(2)


def _horner3(coeffs, y):
    """Value, first and second derivative of ``sum c_n y**n``."""
    f = np.zeros_like(y)
    f1 = np.zeros_like(y)
    f2 = np.zeros_like(y)
    for c in coeffs[::-1]:
        f2 = f2 * y + 2.0 * f1
        f1 = f1 * y + f
        f = f * y + c
    return f, f1, f2


def s0(y):
    """``sin(sqrt(y))/sqrt(y)`` with its first two derivatives in ``y``."""
    return _horner3(_S0, np.asarray(y, dtype=float))


def c0(y):
    """``(1 - cos(sqrt(y)))/y`` with its first two derivatives in ``y``."""
    return _horner3(_C0, np.asarray(y, dtype=float))


def radius(p_norm):
    """Radius ``(1/|p| - |p|)/2`` of ``c_p``; ``inf`` for ``p = 0``."""
    rho = float(p_norm)
    if not (0.0 <= rho <= 1.0):
        raise ValueError(f"|p| must lie in [0, 1], got {p_norm}")
    if rho == 0.0:
        return math.inf
    return 0.5 * (1.0 / rho - rho)


def half_extent(p_norm):
    """Arc length ``v_p`` from ``p`` to the unit sphere along ``c_p``.

    Equals ``R * arccos(R/(R + |p|))``; since that angle is ``2*arctan|p|``
    this is evaluated as ``(1 - |p|**2) * arctan(|p|)/|p|``, which tends to 1
    (the half length of the vertical segment) as ``|p| -> 0``.
    """
    rho = np.asarray(p_norm, dtype=float)
    if np.any((rho < 0.0) | (rho > 1.0)) or np.any(~np.isfinite(rho)):
        raise ValueError("|p| must lie in [0, 1]")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rho > 1e-4, np.arctan(rho) / rho, 1.0 - rho**2 / 3.0 + rho**4 / 5.0)
    out = (1.0 - rho**2) * ratio
    return float(out) if out.ndim == 0 else out


def bending(q):
    """``m = 2/(1 - q)`` and ``w = k**2 = 4q/(1 - q)**2`` for ``q = |p|**2``."""
    q = np.asarray(q, dtype=float)
    m = 2.0 / (1.0 - q)
    return m, q * m * m


class OrthoCircle:
    """The circle ``c_p`` through a point ``p`` of the horizontal disk."""

    def __init__(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape == (3,):
            if p[2] != 0.0:
                raise ValueError("p must lie in the horizontal plane")
            p = p[:2]
        if p.shape != (2,):
            raise ValueError("p must be a planar point")
        self.p = p
        self.p_norm = float(np.hypot(*p))
        if self.p_norm > 1.0:
            raise ValueError("p must lie in the closed unit disk")
        self.R = radius(self.p_norm)
        self.v_p = half_extent(self.p_norm)
        self.degenerate = self.p_norm == 0.0
        self.axis_dir = None if self.degenerate else p / self.p_norm

    @property
    def center(self):
        if self.degenerate:
            return None
        return np.append(self.axis_dir * (self.p_norm + self.R), 0.0)

    def __call__(self, v):
        return eval_circle(self.p, v)

    def __repr__(self):
        return f"OrthoCircle(p={self.p.tolist()}, R={self.R}, v_p={self.v_p})"


def eval_circle(p, v):
    """Point ``c_p(v)`` of the orthogonal circle through ``p``.

    Raises
    ------
    ValueError
        If ``|v| > v_p``, i.e. the point would leave the closed unit ball.
    """
    p = np.asarray(p, dtype=float)[:2]
    v = np.asarray(v, dtype=float)
    q = float(p @ p)
    if q > 1.0:
        raise ValueError("p must lie in the closed unit disk")
    vp = half_extent(math.sqrt(q))
    if np.any(np.abs(v) > vp * (1.0 + 1e-12) + 1e-15):
        raise ValueError(f"|v| exceeds the half extent v_p = {vp}")
    if q == 1.0:
        # boundary point: I_p = {0}
        return np.broadcast_to(np.append(p, 0.0), v.shape + (3,)).copy()
    m, w = bending(q)
    y = w * v * v
    stretch = 1.0 + m * v * v * c0(y)[0]
    height = v * s0(y)[0]
    return np.stack([p[0] * stretch, p[1] * stretch, height], axis=-1)
