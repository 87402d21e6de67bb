"""OBJ export and the torus-of-revolution oracle."""

import numpy as np

from cliffordlines import (revolution_profile, revolution_residual, torus_mesh,
                           write_obj)


def parse_obj(path):
    verts, faces, lines = [], [], []
    with open(path) as fh:
        for row in fh:
            rec = row.split()
            if not rec:
                continue
            if rec[0] == "v":
                verts.append([float(x) for x in rec[1:]])
            elif rec[0] == "f":
                faces.append([int(x) for x in rec[1:]])
            elif rec[0] == "l":
                lines.append([int(x) for x in rec[1:]])
    return np.array(verts), faces, lines


def test_mesh_counts(bump):
    pts, faces = torus_mesh(0.0, bump, 16)
    assert pts.shape == (256, 3)
    assert len(faces) == 256
    assert all(len(f) == 4 for f in faces)


def test_obj_roundtrip(tmp_path, bump):
    pts, faces = torus_mesh(0.0, bump, 8)
    poly = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    path = tmp_path / "mesh.obj"
    write_obj(path, pts, faces, [poly])
    verts, f2, lines = parse_obj(path)
    assert verts.shape == (64 + 3, 3)
    assert np.array_equal(verts[:64], pts)
    assert len(f2) == 64
    assert max(max(f) for f in f2) <= 64
    assert lines == [[65, 66, 67]]


def test_flat_mesh_sits_on_revolution_torus(bump):
    pts, _ = torus_mesh(0.0, bump, 64)
    R, z0, rho = revolution_profile(0.0, bump)
    assert revolution_residual(pts, R, z0, rho) < 1e-6


def test_deformed_mesh_leaves_revolution_torus(bump):
    # the eps = 1/3 surface is visibly not a surface of revolution
    pts, _ = torus_mesh(1.0 / 3.0, bump, 32)
    R, z0, rho = revolution_profile(0.0, bump)
    assert revolution_residual(pts, R, z0, rho) > 0.1
