"""Finite-difference oracle shared by the immersion and acceptance tests."""

import numpy as np

from saddledisk.immersion import domain_extent, eval_psi


def random_interior(rib, n, seed=0):
    rng = np.random.default_rng(seed)
    u = rng.uniform(-0.999, 0.999, n) * rib.u3
    v = rng.uniform(-0.95, 0.95, n) * domain_extent(rib, u)
    return u, v


def fd_partials(rib, u, v, h=1e-3):
    """Fourth-order central differences with steps scaled to the circle radius."""
    f = lambda a, b: eval_psi(rib, a, b, strict=False)
    rho = np.linalg.norm(rib.gamma(u), axis=-1)
    R = np.where(rho > 0, 0.5 * (1 / np.maximum(rho, 1e-300) - rho), np.inf)
    h = h * np.minimum(1.0, R)
    hh = h[..., None]
    w1 = {-2: 1, -1: -8, 1: 8, 2: -1}
    w2 = {-2: -1, -1: 16, 0: -30, 1: 16, 2: -1}
    du = sum(c * f(u + k * h, v) for k, c in w1.items()) / (12 * hh)
    dv = sum(c * f(u, v + k * h) for k, c in w1.items()) / (12 * hh)
    duu = sum(c * f(u + k * h, v) for k, c in w2.items()) / (12 * hh**2)
    dvv = sum(c * f(u, v + k * h) for k, c in w2.items()) / (12 * hh**2)
    duv = sum(
        ci * cj * f(u + i * h, v + j * h) for i, ci in w1.items() for j, cj in w1.items()
    ) / (144 * hh**2)
    return du, dv, duu, duv, dvv


def rel_error(a, b):
    """Per-point error relative to ``max(1, |b|)``."""
    scale_ = np.maximum(1.0, np.linalg.norm(b, axis=-1))
    return np.max(np.linalg.norm(a - b, axis=-1) / scale_)
