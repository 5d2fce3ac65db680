"""Piecewise Chebyshev interpolation with right-anchored tail integrals.

The ribbon quantities that matter near the flat gluing points are tail
integrals ``T(u) = int_u^b f``, which become astronomically small but stay
positive.  Anchoring every antiderivative at the right end of its panel and
summing panel totals from the right keeps those values accurate in a
relative sense, provided ``f`` varies by a bounded factor across a panel.
"""

import numpy as np
from numpy.polynomial import chebyshev as C


def clenshaw(coeffs, xi):
    """Evaluate Chebyshev series row-wise: ``coeffs[i]`` at ``xi[i]``."""
    b1 = np.zeros_like(xi)
    b2 = np.zeros_like(xi)
    for j in range(coeffs.shape[-1] - 1, 0, -1):
        b1, b2 = 2.0 * xi * b1 - b2 + coeffs[..., j], b1
    return xi * b1 - b2 + coeffs[..., 0]


class PanelGrid:
    """Panels ``[breaks[k], breaks[k+1]]`` with Chebyshev-Lobatto nodes.

    Parameters
    ----------
    breaks : array_like
        Strictly increasing panel endpoints.
    degree : int
        Polynomial degree on each panel.
    """

    def __init__(self, breaks, degree=20):
        self.breaks = np.asarray(breaks, dtype=float)
        if np.any(np.diff(self.breaks) <= 0):
            raise ValueError("panel breaks must be strictly increasing")
        self.degree = int(degree)
        self.ref_nodes = -np.cos(np.pi * np.arange(degree + 1) / degree)
        self._vinv = np.linalg.inv(C.chebvander(self.ref_nodes, degree))
        lo, hi = self.breaks[:-1], self.breaks[1:]
        self.mid = 0.5 * (lo + hi)
        self.half = 0.5 * (hi - lo)
        self.nodes = self.mid[:, None] + self.half[:, None] * self.ref_nodes
        # pin the shared endpoints exactly
        self.nodes[:, 0] = lo
        self.nodes[:, -1] = hi

    @property
    def n_panels(self):
        return self.breaks.size - 1

    def locate(self, x):
        x = np.asarray(x, dtype=float)
        k = np.searchsorted(self.breaks, x, side="right") - 1
        k = np.clip(k, 0, self.n_panels - 1)
        xi = (x - self.mid[k]) / self.half[k]
        return k, np.clip(xi, -1.0, 1.0)

    def fit(self, values):
        """Chebyshev coefficients per panel from values at ``self.nodes``."""
        return values @ self._vinv.T

    def interpolant(self, values):
        return PanelFunction(self, self.fit(values))

    def tail(self, values):
        """Tail integral ``x -> int_x^{breaks[-1]} f`` of the sampled ``f``."""
        return TailIntegral(self, self.fit(values))


class PanelFunction:
    def __init__(self, grid, coeffs):
        self.grid = grid
        self.coeffs = coeffs

    def __call__(self, x):
        k, xi = self.grid.locate(x)
        return clenshaw(self.coeffs[k], xi)


class TailIntegral:
    def __init__(self, grid, coeffs):
        self.grid = grid
        # antiderivative on the reference panel, zero at xi = +1
        anti = C.chebint(coeffs, lbnd=1.0, axis=-1)
        self._anti = -anti * grid.half[:, None]
        totals = clenshaw(self._anti, -np.ones(grid.n_panels))
        self.panel_totals = totals
        # sum from the far end so tiny contributions accumulate first
        right = np.cumsum(totals[::-1])[::-1]
        self._after = np.concatenate([right[1:], [0.0]])

    def __call__(self, x):
        k, xi = self.grid.locate(x)
        return self._after[k] + clenshaw(self._anti[k], xi)

    def at_nodes(self):
        """Tail values at every panel node, shape ``(n_panels, degree+1)``."""
        xi = np.broadcast_to(self.grid.ref_nodes, self.grid.nodes.shape)
        vals = self._after[:, None] + clenshaw(self._anti[:, None, :], xi)
        vals[:, -1] = self._after
        return vals
