"""Stereographic projection S^3 -> R^3 and conformality cross-checks.

The pole is first rotated onto (0,0,0,1) by a fixed Householder
reflection R, then q = R p maps to (q1, q2, q3)/(1 - q4).  Projection of
jets is the exact chain rule through that formula, so projected
fundamental forms and principal directions can be computed natively in
R^3 and compared against pushforwards from S^3.
"""

from __future__ import annotations

import numpy as np

from .bumps import BumpFunction
from .errors import PoleProximityError
from .field import FieldCoefficients, lmn_from_forms, principal_directions, direction_angle
from .forms import (FormCoefficients, Surface3Jet, first_form, first_form_r3,
                    second_form_r3, second_form_s3)
from .geometry import SurfaceJet, TWO_PI, deformed

__all__ = [
    "DEFAULT_POLE", "pole_rotation", "stereo", "stereo_jet", "pole_clearance",
    "principal_match", "project_orbit", "tangent_distortion",
]

DEFAULT_POLE = np.array([0.0, 0.0, 0.0, 1.0])
_POLE_EPS = 1e-8


def pole_rotation(pole) -> np.ndarray:
    """Orthogonal 4x4 map sending the pole to (0,0,0,1).

    Householder reflection in pole - e4 (identity when pole is e4);
    symmetric, involutive, and fully deterministic.
    """
    pole = np.asarray(pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    w = pole - np.array([0.0, 0.0, 0.0, 1.0])
    n2 = float(w @ w)
    if n2 < 1e-30:
        return np.eye(4)
    return np.eye(4) - 2.0 * np.outer(w, w) / n2


def stereo(p, pole=DEFAULT_POLE) -> np.ndarray:
    """Project unit 4-vectors (shape (..., 4)) to R^3."""
    p = np.asarray(p, dtype=float)
    pole = np.asarray(pole, dtype=float) / np.linalg.norm(pole)
    dist = np.linalg.norm(p - pole, axis=-1)
    if np.any(dist < _POLE_EPS):
        raise PoleProximityError("point within 1e-8 of the projection pole")
    q = p @ pole_rotation(pole).T
    return q[..., :3] / (1.0 - q[..., 3:4])


def stereo_jet(jet: SurfaceJet, pole=DEFAULT_POLE) -> Surface3Jet:
    """Chain-rule pushforward of a chart jet through the projection."""
    pole = np.asarray(pole, dtype=float) / np.linalg.norm(pole)
    dist = np.linalg.norm(jet.p - pole, axis=-1)
    if np.any(dist < _POLE_EPS):
        raise PoleProximityError("surface point within 1e-8 of the projection pole")
    R = pole_rotation(pole).T
    q, qu, qv = jet.p @ R, jet.du @ R, jet.dv @ R
    quu, quv, qvv = jet.duu @ R, jet.duv @ R, jet.dvv @ R

    w = q[..., :3]
    wu, wv = qu[..., :3], qv[..., :3]
    wuu, wuv, wvv = quu[..., :3], quv[..., :3], qvv[..., :3]
    z = q[..., 3:4]
    zu, zv = qu[..., 3:4], qv[..., 3:4]
    zuu, zuv, zvv = quu[..., 3:4], quv[..., 3:4], qvv[..., 3:4]

    s = 1.0 / (1.0 - z)              # scalar factor 1/(1 - q4)
    su = s * s * zu
    sv = s * s * zv
    suu = 2.0 * s * su * zu + s * s * zuu
    suv = 2.0 * s * sv * zu + s * s * zuv
    svv = 2.0 * s * sv * zv + s * s * zvv

    y = w * s
    yu = wu * s + w * su
    yv = wv * s + w * sv
    yuu = wuu * s + 2.0 * wu * su + w * suu
    yuv = wuv * s + wu * sv + wv * su + w * suv
    yvv = wvv * s + 2.0 * wv * sv + w * svv
    return Surface3Jet(y, yu, yv, yuu, yuv, yvv)


def pole_clearance(eps: float, bump: BumpFunction, pole=DEFAULT_POLE,
                   grid_n: int = 256) -> float:
    """min over a grid of |a_eps(u,v) - pole|; must stay above 0.1."""
    g = np.arange(grid_n) * (TWO_PI / grid_n)
    U, V = np.meshgrid(g, g, indexing="ij")
    p = deformed(U, V, eps, bump).p
    pole = np.asarray(pole, dtype=float) / np.linalg.norm(pole)
    return float(np.min(np.linalg.norm(p - pole, axis=-1)))


def _orthonormal_tangent(jet: SurfaceJet):
    """I-orthonormal chart frame (X, Y) as (du, dv) coefficient pairs."""
    E, F, G = first_form(jet)
    x = np.stack([1.0 / np.sqrt(E), np.zeros_like(E)], axis=-1)
    # Gram-Schmidt of d/dv against X
    yv = np.stack([-F / E, np.ones_like(E)], axis=-1)
    norm = np.sqrt(G - F * F / E)
    return x, yv / norm[..., None]


def _push(coeffs, jet3: Surface3Jet):
    """Map chart direction coefficients through the projected first partials."""
    return coeffs[..., 0:1] * jet3.du + coeffs[..., 1:2] * jet3.dv


def tangent_distortion(eps: float, bump: BumpFunction, pole=DEFAULT_POLE,
                       n_points: int = 1000, seed: int = 20240817):
    """Conformality residuals at random points.

    Returns (max angle error vs pi/2, max relative length mismatch) for
    images of I-orthonormal tangent frames.  Deterministic via the fixed
    seed.
    """
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, TWO_PI, n_points)
    v = rng.uniform(0.0, TWO_PI, n_points)
    jet = deformed(u, v, eps, bump)
    jet3 = stereo_jet(jet, pole)
    X, Y = _orthonormal_tangent(jet)
    xi, yi = _push(X, jet3), _push(Y, jet3)
    nx = np.linalg.norm(xi, axis=-1)
    ny = np.linalg.norm(yi, axis=-1)
    cosang = np.sum(xi * yi, axis=-1) / (nx * ny)
    ang_err = float(np.max(np.abs(np.arcsin(np.clip(cosang, -1, 1)))))
    len_err = float(np.max(np.abs(nx / ny - 1.0)))
    return ang_err, len_err


def principal_match(eps: float, bump: BumpFunction, pole=DEFAULT_POLE,
                    samples: int = 32) -> float:
    """Max angle between pushed-forward and natively computed principal lines.

    At each grid sample the principal directions on S^3 (determinant
    pipeline) are pushed through the projection and compared with the
    principal directions of the projected surface computed from the
    classical R^3 formulas; pairs are matched by largest |cos|.
    """
    g = (np.arange(samples) + 0.5) * (TWO_PI / samples)
    U, V = np.meshgrid(g, g, indexing="ij")
    jet = deformed(U, V, eps, bump)
    jet3 = stereo_jet(jet, pole)

    fc = FormCoefficients(*first_form(jet), *second_form_s3(jet))
    d1, d2 = principal_directions(lmn_from_forms(fc))
    p1, p2 = _push(d1, jet3), _push(d2, jet3)

    fc3 = FormCoefficients(*first_form_r3(jet3), *second_form_r3(jet3))
    e1, e2 = principal_directions(lmn_from_forms(fc3))
    q1, q2 = _push(e1, jet3), _push(e2, jet3)

    def line_angle(a, b):
        cross = np.linalg.norm(np.cross(a, b), axis=-1)
        dot = np.abs(np.sum(a * b, axis=-1))
        return np.arctan2(cross, dot)

    def pairing_angle(a, b1, b2):
        return np.minimum(line_angle(a, b1), line_angle(a, b2))

    return float(max(np.max(pairing_angle(p1, q1, q2)),
                     np.max(pairing_angle(p2, q1, q2))))


def project_orbit(orbit, eps: float, bump: BumpFunction, pole=DEFAULT_POLE) -> np.ndarray:
    """Orbit samples mapped through the deformed chart and the projection."""
    p = deformed(orbit.us, orbit.vs, eps, bump).p
    return stereo(p, pole)
