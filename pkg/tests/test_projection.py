"""Stereographic projection, conformality, principal-line invariance."""

import numpy as np
import pytest

from cliffordlines import (Branch, DEFAULT_POLE, PoleProximityError, TWO_PI,
                           clifford, deformed, integrate_orbit, pole_clearance,
                           pole_rotation, principal_match, project_orbit,
                           revolution_profile, revolution_residual, stereo,
                           stereo_jet, tangent_distortion, first_form_r3,
                           second_form_r3)

from conftest import grid


def test_stereo_antipode_maps_to_origin():
    assert np.allclose(stereo(np.array([0.0, 0, 0, -1.0])), [0, 0, 0], atol=1e-15)


def test_stereo_equator_point():
    assert np.allclose(stereo(np.array([1.0, 0, 0, 0.0])), [1.0, 0, 0], atol=1e-15)


def test_pole_rotation_properties():
    pole = np.array([0.3, -0.5, 0.2, 0.78])
    pole /= np.linalg.norm(pole)
    R = pole_rotation(pole)
    assert np.allclose(R @ R.T, np.eye(4), atol=1e-14)
    assert np.allclose(R @ pole, [0, 0, 0, 1.0], atol=1e-14)
    assert np.allclose(pole_rotation([0, 0, 0, 1.0]), np.eye(4))


def test_pole_proximity_raises():
    with pytest.raises(PoleProximityError):
        stereo(np.array([0.0, 0, 0, 1.0]))


def test_clifford_clears_default_pole(bump):
    # x4 on the torus peaks at sqrt(2)/2, so the projection is global
    U, V = grid(64)
    x4 = clifford(U, V).p[..., 3]
    assert np.max(np.abs(x4)) <= np.sqrt(2) / 2 + 1e-15
    assert pole_clearance(0.0, bump, grid_n=128) > 0.1
    assert pole_clearance(1.0 / 3.0, bump, grid_n=256) > 0.1


def test_stereo_jet_first_partials_match_differences(bump):
    u0, v0, s, eps = 1.2, 0.7, 1e-4, 0.1
    jet3 = stereo_jet(deformed(u0, v0, eps, bump))
    val = lambda u, v: stereo(deformed(u, v, eps, bump).p)
    du = (val(u0 + s, v0) - val(u0 - s, v0)) / (2 * s)
    dv = (val(u0, v0 + s) - val(u0, v0 - s)) / (2 * s)
    assert np.max(np.abs(jet3.du - du)) < 1e-6
    assert np.max(np.abs(jet3.dv - dv)) < 1e-6
    duu = (val(u0 + s, v0) - 2 * val(u0, v0) + val(u0 - s, v0)) / (s * s)
    assert np.max(np.abs(jet3.duu - duu)) < 1e-5


def test_conformality_of_tangent_frames(bump):
    for eps in (0.0, 1.0 / 3.0):
        ang, length = tangent_distortion(eps, bump)
        assert ang < 1e-9
        assert length < 1e-9


def test_projected_flat_torus_is_revolution_surface(bump):
    U, V = grid(48, offset=0.1)
    jet3 = stereo_jet(deformed(U, V, 0.0, bump))
    E, F, G = first_form_r3(jet3)
    e, f, g = second_form_r3(jet3)
    tr = (E * g + G * e - 2 * F * f) / (E * G - F * F)
    det = (e * g - f * f) / (E * G - F * F)
    disc = np.sqrt(tr * tr - 4 * det)
    k1, k2 = (tr + disc) / 2, (tr - disc) / 2
    # principal curvatures depend on v only
    assert np.max(np.abs(k1 - k1[0:1, :])) < 1e-9
    assert np.max(np.abs(k2 - k2[0:1, :])) < 1e-9


def test_principal_match_all_eps(bump):
    assert principal_match(0.0, bump, samples=32) < 1e-8
    assert principal_match(0.1, bump, samples=32) < 1e-6
    assert principal_match(1.0 / 3.0, bump, samples=32) < 1e-6


def test_principal_match_pole_invariance(bump):
    pole = np.array([0.0, 0.1, 0.0, np.sqrt(1 - 0.01)])
    a = principal_match(0.1, bump, samples=16)
    b = principal_match(0.1, bump, pole=pole, samples=16)
    assert abs(a - b) < 1e-6


def test_project_orbit_circle_planarity(bump):
    orbit = integrate_orbit((0.0, 1.0), Branch.FIRST, 0.0, bump, u_span=TWO_PI)
    pts = project_orbit(orbit, 0.0, bump)
    centered = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    assert sv[-1] < 1e-9                       # planar
    # closed: projected endpoints coincide
    assert np.linalg.norm(pts[0] - pts[-1]) < 1e-10
    # circular: a parallel keeps (sqrt(x^2+y^2), z) constant
    w = np.hypot(pts[:, 0], pts[:, 1])
    assert np.ptp(w) < 1e-9
    assert np.ptp(pts[:, 2]) < 1e-9


def test_projected_orbit_lies_on_surface(bump):
    R, z0, rho = revolution_profile(0.0, bump)
    orbit = integrate_orbit((0.4, 1.0), Branch.FIRST, 0.0, bump, u_span=TWO_PI)
    pts = project_orbit(orbit, 0.0, bump)
    assert revolution_residual(pts, R, z0, rho) < 1e-9


def test_revolution_profile_of_flat_torus(bump):
    # image of the undeformed torus: profile circle radius 1 around w = sqrt(2)
    R, z0, rho = revolution_profile(0.0, bump)
    assert abs(R - np.sqrt(2.0)) < 1e-12
    assert abs(z0) < 1e-12
    assert abs(rho - 1.0) < 1e-12
