"""
Circles orthogonal to the disk and the sphere
=============================================

Each point p of the horizontal disk carries a vertical circle arc that
starts straight up and hits the unit sphere at a right angle.
"""

import numpy as np

from saddledisk import OrthoCircle

for rho in (0.0, 0.3, 0.6, 0.9):
    c = OrthoCircle([rho, 0.0])
    top = c(c.v_p)
    print(f"|p| = {rho:3.1f}  R = {c.R:8.4f}  v_p = {c.v_p:.6f}  |c(v_p)| = {np.linalg.norm(top):.15f}")

# the arc near p = 0 is almost the vertical diameter
c = OrthoCircle([1e-6, 0.0])
print("near-degenerate top point:", c(c.v_p))
