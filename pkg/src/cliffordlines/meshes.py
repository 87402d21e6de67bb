"""Quad meshes of projected tori and OBJ export.

OBJ files carry only ``v`` records, quad ``f`` records (seam-wrapped),
and ``l`` polyline records.  Floats are written with shortest
round-trip decimals so identical inputs give byte-identical files.
"""

from __future__ import annotations

import numpy as np

from .bumps import BumpFunction
from .geometry import TWO_PI, deformed
from .projection import DEFAULT_POLE, stereo

__all__ = ["torus_mesh", "write_obj", "revolution_profile", "revolution_residual"]


def torus_mesh(eps: float, bump: BumpFunction, grid: int, pole=DEFAULT_POLE):
    """Projected grid x grid vertex array (grid^2, 3) and wrapped quad faces."""
    g = np.arange(grid) * (TWO_PI / grid)
    U, V = np.meshgrid(g, g, indexing="ij")
    pts = stereo(deformed(U, V, eps, bump).p, pole).reshape(-1, 3)
    faces = []
    for i in range(grid):
        for j in range(grid):
            i1 = (i + 1) % grid
            j1 = (j + 1) % grid
            faces.append((i * grid + j, i1 * grid + j, i1 * grid + j1, i * grid + j1))
    return pts, faces


def write_obj(path, vertices, faces=(), polylines=()):
    """Write vertices/quads plus extra polylines (each an (n, 3) array)."""
    lines = []
    for p in vertices:
        lines.append(f"v {float(p[0])!r} {float(p[1])!r} {float(p[2])!r}")
    offset = len(vertices)
    poly_records = []
    for poly in polylines:
        idx = []
        for p in poly:
            lines.append(f"v {float(p[0])!r} {float(p[1])!r} {float(p[2])!r}")
            offset += 1
            idx.append(offset)
        poly_records.append(idx)
    for f in faces:
        lines.append("f " + " ".join(str(i + 1) for i in f))
    for idx in poly_records:
        lines.append("l " + " ".join(str(i) for i in idx))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def revolution_profile(eps: float, bump: BumpFunction, pole=DEFAULT_POLE):
    """Circle (R, z0, rho) of the revolution profile, fit from three parallels.

    Each parallel is the projected image of a u-circle at fixed v; for a
    surface of revolution around the z-axis each parallel has constant
    (sqrt(x^2+y^2), z).  Three parallels determine the profile circle.
    """
    ws, zs = [], []
    for v in (0.0, TWO_PI / 3.0, 2.0 * TWO_PI / 3.0):
        p = stereo(deformed(0.0, v, eps, bump).p, pole)
        ws.append(float(np.hypot(p[..., 0], p[..., 1])))
        zs.append(float(p[..., 2]))
    (x1, y1), (x2, y2), (x3, y3) = zip(ws, zs)
    # circumcenter of three points in the (w, z) half-plane
    d = 2.0 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2))
    cx = ((x1 * x1 + y1 * y1) * (y2 - y3) + (x2 * x2 + y2 * y2) * (y3 - y1)
          + (x3 * x3 + y3 * y3) * (y1 - y2)) / d
    cy = ((x1 * x1 + y1 * y1) * (x3 - x2) + (x2 * x2 + y2 * y2) * (x1 - x3)
          + (x3 * x3 + y3 * y3) * (x2 - x1)) / d
    rho = float(np.hypot(x1 - cx, y1 - cy))
    return float(cx), float(cy), rho


def revolution_residual(vertices, R: float, z0: float, rho: float) -> float:
    """max distance of vertices from the torus of revolution (R, z0, rho)."""
    w = np.hypot(vertices[:, 0], vertices[:, 1])
    return float(np.max(np.abs(np.hypot(w - R, vertices[:, 2] - z0) - rho)))
