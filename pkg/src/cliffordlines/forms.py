"""First and second fundamental forms, in S^3 and in R^3.

For immersions a: T^2 -> S^3 the second form is computed from 4x4
determinants with rows ordered [a, a_u, a_v, a_second] and expanded in
the standard orientation of R^4:

    e = det[a, a_u, a_v, a_uu] / sqrt(EG - F^2),   etc.

Desk values for the undeformed torus under this convention:
(E, F, G) = (1/2, 0, 1/2) and (e, f, g) = (-1/2, 0, 1/2), i.e. principal
curvatures -1 and +1.

``closed_form_coefficients`` evaluates exact closed-form expressions for
the deformed family (machine-derived from the normal-graph formula, and
cross-checked against the jet pipeline by the test suite).  Under this
convention (e, f, g)_closed = -sqrt(EG - F^2) * (e, f, g)_determinant;
the two routes agree projectively, which is what every direction-field
computation needs.  The measured ratio is reported, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bumps import BumpFunction
from .errors import DegenerateMetricError
from .geometry import SurfaceJet, canonical_angles

__all__ = [
    "FormCoefficients", "first_form", "second_form_s3",
    "closed_form_coefficients", "second_form_scale_ratio",
    "Surface3Jet", "second_form_r3", "first_form_r3",
]


@dataclass(frozen=True)
class FormCoefficients:
    E: np.ndarray | float
    F: np.ndarray | float
    G: np.ndarray | float
    e: np.ndarray | float
    f: np.ndarray | float
    g: np.ndarray | float


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def first_form(jet: SurfaceJet):
    """(E, F, G); raises if the metric degenerates anywhere."""
    E = _dot(jet.du, jet.du)
    F = _dot(jet.du, jet.dv)
    G = _dot(jet.dv, jet.dv)
    disc = E * G - F * F
    if np.any(disc <= 0.0):
        raise DegenerateMetricError("EG - F^2 <= 0 at some point")
    return E, F, G


def second_form_s3(jet: SurfaceJet):
    """(e, f, g) from the determinant formulas on S^3."""
    E, F, G = first_form(jet)
    sq = np.sqrt(E * G - F * F)
    rows = lambda second: np.stack([jet.p, jet.du, jet.dv, second], axis=-2)
    e = np.linalg.det(rows(jet.duu)) / sq
    f = np.linalg.det(rows(jet.duv)) / sq
    g = np.linalg.det(rows(jet.dvv)) / sq
    return e, f, g


def closed_form_coefficients(u, v, eps: float, bump: BumpFunction) -> FormCoefficients:
    """Exact closed forms of all six coefficients for the deformed family."""
    u, v = canonical_angles(u, v)
    b = bump.jet(u, v)
    h, hu, hv, huu, huv, hvv = b.h, b.hu, b.hv, b.huu, b.huv, b.hvv
    h2 = h * h
    D = 1.0 + eps * eps * h2
    D2 = D * D
    E = (1.0 - 2.0 * eps * h + 2.0 * eps**2 * (h2 + hu * hu)
         - 2.0 * eps**3 * h * h2 + eps**4 * h2 * h2) / (2.0 * D2)
    F = eps**2 * hu * hv / D2
    G = (1.0 + 2.0 * eps * h + 2.0 * eps**2 * (h2 + hv * hv)
         + 2.0 * eps**3 * h * h2 + eps**4 * h2 * h2) / (2.0 * D2)
    e = (1.0 + eps * h) * (1.0 + eps * (2.0 * huu - h)
                           + eps**2 * (4.0 * hu * hu - 2.0 * h * huu - h2)
                           + eps**3 * h * h2) / (4.0 * D2)
    f = eps * (huv + eps**2 * h * (2.0 * hu * hv - h * huv)) / (2.0 * D2)
    g = (1.0 - eps * h) * (-1.0 + eps * (2.0 * hvv - h)
                           + eps**2 * (h2 - 4.0 * hv * hv + 2.0 * h * hvv)
                           + eps**3 * h * h2) / (4.0 * D2)
    return FormCoefficients(E, F, G, e, f, g)


def second_form_scale_ratio(jet: SurfaceJet, fc: FormCoefficients):
    """Measured ratio lambda = (closed-form e, g) / (determinant e, g).

    Returns (median ratio, max spread across components and points,
    max deviation of the ratio from -sqrt(EG - F^2)).  f is excluded from
    the ratio estimate wherever it is ~0 (the undeformed torus).
    """
    e, f, g = second_form_s3(jet)
    E, F, G = first_form(jet)
    ratios = [np.asarray(fc.e / e), np.asarray(fc.g / g)]
    fd = np.asarray(f)
    if np.all(np.abs(fd) > 1e-12):
        ratios.append(np.asarray(fc.f / f))
    ratios = np.stack(ratios)
    lam = float(np.median(ratios))
    spread = float(np.max(ratios) - np.min(ratios))
    model = -np.sqrt(E * G - F * F)
    dev = float(np.max(np.abs(ratios - model)))
    return lam, spread, dev


# --- classical R^3 formulas ------------------------------------------------

@dataclass(frozen=True)
class Surface3Jet:
    """Chart jet of a surface in R^3; components shaped (..., 3)."""

    p: np.ndarray
    du: np.ndarray
    dv: np.ndarray
    duu: np.ndarray
    duv: np.ndarray
    dvv: np.ndarray


def first_form_r3(jet3: Surface3Jet):
    E = _dot(jet3.du, jet3.du)
    F = _dot(jet3.du, jet3.dv)
    G = _dot(jet3.dv, jet3.dv)
    disc = E * G - F * F
    if np.any(disc <= 0.0):
        raise DegenerateMetricError("EG - F^2 <= 0 at some point (R^3 chart)")
    return E, F, G


def second_form_r3(jet3: Surface3Jet):
    """(e, f, g) against the unit normal (b_u x b_v)/|b_u x b_v|."""
    first_form_r3(jet3)
    n = np.cross(jet3.du, jet3.dv)
    n = n / np.linalg.norm(n, axis=-1, keepdims=True)
    return _dot(n, jet3.duu), _dot(n, jet3.duv), _dot(n, jet3.dvv)
