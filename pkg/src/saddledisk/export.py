"""Triangle meshes of the disk with per-vertex curvature, as OBJ and CSV.

Vertices are the distinct points of the normalized grid in row-major
order, so each collapsed end column contributes a single vertex and is
closed with a triangle fan.
"""

from dataclasses import dataclass
import io

import numpy as np

from .immersion import eval_jet, grid_arrays

CSV_HEADER = "u,v,x,y,z,K,H,k1,k2,piece"


def _fmt(x):
    return format(float(x), ".17g")


@dataclass
class MeshOutput:
    vertices: np.ndarray  # (n, 3)
    faces: np.ndarray  # (m, 3), 0-based
    u: np.ndarray
    v: np.ndarray
    K: np.ndarray
    H: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    piece: np.ndarray

    def face_areas(self):
        a, b, c = (self.vertices[self.faces[:, k]] for k in range(3))
        return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=-1)

    def to_obj(self):
        out = io.StringIO()
        for p in self.vertices:
            out.write(f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}\n")
        for f in self.faces + 1:
            out.write(f"f {f[0]} {f[1]} {f[2]}\n")
        return out.getvalue()

    def to_csv(self):
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for i in range(len(self.vertices)):
            row = [self.u[i], self.v[i], *self.vertices[i], self.K[i], self.H[i], self.k1[i], self.k2[i]]
            out.write(",".join(_fmt(x) for x in row) + f",{int(self.piece[i])}\n")
        return out.getvalue()


def build_mesh(rib, nu=50, nv=50):
    """Mesh of ``psi`` over the normalized ``nu x nv`` grid."""
    if nu < 3 or nv < 2:
        raise ValueError("need nu >= 3 and nv >= 2")
    U, V, _ = grid_arrays(rib, nu, nv)
    # index map: end columns collapse to one vertex
    index = np.empty((nu, nv), dtype=int)
    keep = np.zeros((nu, nv), dtype=bool)
    keep[1:-1] = True
    keep[0, 0] = keep[-1, 0] = True
    flat = np.cumsum(keep.ravel()).reshape(nu, nv) - 1
    index[:] = flat
    index[0, :] = flat[0, 0]
    index[-1, :] = flat[-1, 0]
    uu, vv = U[keep], V[keep]
    j = eval_jet(rib, uu, vv)
    faces = []
    for i in range(nu - 1):
        for k in range(nv - 1):
            a, b = index[i, k], index[i + 1, k]
            c, d = index[i + 1, k + 1], index[i, k + 1]
            if i > 0:
                faces.append((a, c, d))
            if i < nu - 2:
                faces.append((a, b, c))
    return MeshOutput(
        vertices=j.pos,
        faces=np.array(faces, dtype=int),
        u=uu,
        v=vv,
        K=j.K,
        H=j.H,
        k1=j.k1,
        k2=j.k2,
        piece=j.piece,
    )


def read_csv(text):
    """Parse a sidecar CSV back into a dict of column arrays."""
    lines = text.strip().splitlines()
    if lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    rows = [ln.split(",") for ln in lines[1:]]
    cols = CSV_HEADER.split(",")
    data = {c: np.array([float(r[k]) for r in rows]) for k, c in enumerate(cols[:-1])}
    data["piece"] = np.array([int(r[-1]) for r in rows])
    return data


def read_obj(text):
    """Vertices and 0-based faces of an OBJ written by :meth:`MeshOutput.to_obj`."""
    verts, faces = [], []
    for ln in text.splitlines():
        parts = ln.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(x) - 1 for x in parts[1:4]])
    return np.array(verts), np.array(faces, dtype=int)
