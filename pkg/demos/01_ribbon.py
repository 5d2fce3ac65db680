"""
Building a ribbon
=================

A ribbon is two axis segments joined by a convex arc that turns by 3*pi/2.
Here we build the default one, look at its junction data, and watch how
fast the curvature dies off near the gluing points.
"""

import numpy as np

from saddledisk import RibbonSpec, build_ribbon, scale

# build and validate; a ValidationFailure would name the broken property
rib = build_ribbon(RibbonSpec())
for key, val in rib.summary().items():
    print(f"{key:>8s} = {val:.15g}")

# the arc meets the segments at (0, a) and (a, 0)
print("gamma(+-u2) =", rib.gamma(np.array([rib.u2, -rib.u2])).tolist())

# curvature vanishes to infinite order: kappa and the remaining turning
# are tiny but positive long before u2
for u in (0.7, 0.78, 0.79, 0.795, 0.799):
    print(f"u = {u:5.3f}  kappa = {float(rib.kappa(u)):.3e}  tail turning = {float(rib.tail_turning(u)):.3e}")

# the homothety shrinks the arc and lengthens the segments
for t in (1.0, 0.75, 0.25):
    r = scale(rib, t)
    print(f"t = {t:4.2f}  u3 = {r.u3:8.4f}  max |gamma| = {r.max_radius():.4f}  min R = {r.min_circle_radius():.4f}")
