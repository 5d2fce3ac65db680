"""
Exporting a mesh
================

Writes the t = 3/4 disk as an OBJ with a CSV of curvatures next to it,
ready for any mesh viewer.
"""

import sys
from pathlib import Path

import numpy as np

from saddledisk import RibbonSpec, build_ribbon, scale
from saddledisk.export import build_mesh

out = Path(sys.argv[1] if len(sys.argv) > 1 else "disk_t075.obj")
mesh = build_mesh(scale(build_ribbon(RibbonSpec()), 0.75), 60, 40)
out.write_text(mesh.to_obj())
out.with_suffix(".csv").write_text(mesh.to_csv())

print(f"{len(mesh.vertices)} vertices, {len(mesh.faces)} faces -> {out}")
print(f"Gaussian curvature range: [{mesh.K.min():.3e}, {mesh.K.max():.3e}]")
print("smallest triangle area:", mesh.face_areas().min())
print("vertices per piece:", {int(p): int(np.sum(mesh.piece == p)) for p in (1, 2, 3)})
