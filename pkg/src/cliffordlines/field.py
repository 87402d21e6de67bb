"""The principal-line quadratic field L dv^2 + M du dv + N du^2 = 0.

L = Fg - Gf, M = Eg - Ge, N = Ef - Fe.  Built either from fundamental
forms (any convention; directions are scale-invariant) or from exact
closed-form polynomials in eps for the deformed family.  The polynomial
set is normalized so that (L, M, N)(u, v, 0) = (0, 1, 0); it equals the
determinant-pipeline field times the positive factor
4 (1 + eps^2 h^2)^4 sqrt(EG - F^2), which ``lmn_normalization`` measures
rather than assumes.

Root extraction works in homogeneous coordinates so the branch with
dv/du -> infinity at eps = 0 costs no special cases.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bumps import BumpFunction
from .errors import AmbiguousBranchError, UmbilicError
from .forms import FormCoefficients, closed_form_coefficients, first_form, second_form_s3
from .geometry import canonical_angles, deformed

__all__ = [
    "UMBILIC_TOL", "Branch", "FieldCoefficients", "lmn_from_forms",
    "lmn_closed_form", "lmn_scalar", "lmn_normalization", "principal_directions",
    "select_branch", "umbilic_scan", "consistency_check", "direction_angle",
]

UMBILIC_TOL = 1e-10


class Branch(enum.Enum):
    """The two principal foliations; FIRST is tangent to (du:dv)=(1:0) at eps=0."""

    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class FieldCoefficients:
    L: np.ndarray | float
    M: np.ndarray | float
    N: np.ndarray | float

    @property
    def delta(self):
        """Discriminant M^2 - 4LN of the direction quadratic."""
        return self.M * self.M - 4.0 * self.L * self.N


def lmn_from_forms(fc: FormCoefficients) -> FieldCoefficients:
    return FieldCoefficients(
        fc.F * fc.g - fc.G * fc.f,
        fc.E * fc.g - fc.G * fc.e,
        fc.E * fc.f - fc.F * fc.e,
    )


def lmn_closed_form(u, v, eps: float, bump: BumpFunction) -> FieldCoefficients:
    """Exact eps-polynomials of the normalized field coefficients."""
    u, v = canonical_angles(u, v)
    b = bump.jet(u, v)
    L, M, N = _lmn_poly(b.h, b.hu, b.hv, b.huu, b.huv, b.hvv, eps)
    return FieldCoefficients(L, M, N)


def _lmn_poly(h, hu, hv, huu, huv, hvv, eps):
    """Polynomial kernel; works on arrays and on plain floats alike."""
    h2 = h * h
    h3 = h2 * h
    h4 = h2 * h2
    h5 = h4 * h
    h6 = h4 * h2
    hu2 = hu * hu
    hv2 = hv * hv
    uv = hu * hv
    e1 = eps
    e2 = e1 * e1
    e3 = e2 * e1
    e4 = e2 * e2
    e5 = e4 * e1
    e6 = e4 * e2
    e7 = e6 * e1
    e8 = e4 * e4
    L = (e1 * huv + e2 * (2.0 * h * huv + uv)
         + e3 * (h2 * huv + 2.0 * h * uv - 2.0 * uv * hvv + 2.0 * huv * hv2)
         + e4 * (2.0 * h2 * uv + 4.0 * uv * hv2)
         + e5 * (-h4 * huv + 4.0 * h3 * uv + 2.0 * h2 * uv * hvv - 2.0 * h2 * huv * hv2)
         + e6 * (-2.0 * h5 * huv + 5.0 * h4 * uv)
         + e7 * (-h6 * huv + 2.0 * h5 * uv))
    M = (1.0 + e1 * (huu - hvv)
         + e2 * (2.0 * h * (huu + hvv) + 3.0 * (hu2 + hv2))
         + e3 * (h2 * (huu - hvv) + 6.0 * h * (hu2 - hv2)
                 - 2.0 * hu2 * hvv + 2.0 * huu * hv2)
         + e4 * (-2.0 * h4 + 6.0 * h2 * (hu2 + hv2) + 8.0 * hu2 * hv2)
         + e5 * (h4 * (hvv - huu) + 8.0 * h3 * (hu2 - hv2)
                 + 2.0 * h2 * (hu2 * hvv - huu * hv2))
         + e6 * (-2.0 * h5 * (huu + hvv) + 7.0 * h4 * (hu2 + hv2))
         + e7 * (h6 * (hvv - huu) + 2.0 * h5 * (hu2 - hv2))
         + e8 * h4 * h4)
    N = (-e1 * huv + e2 * (2.0 * h * huv + uv)
         + e3 * (-h2 * huv - 2.0 * h * uv - 2.0 * hu2 * huv + 2.0 * uv * huu)
         + e4 * (2.0 * h2 * uv + 4.0 * hu2 * uv)
         + e5 * (h4 * huv - 4.0 * h3 * uv - 2.0 * h2 * uv * huu + 2.0 * h2 * hu2 * huv)
         + e6 * (-2.0 * h5 * huv + 5.0 * h4 * uv)
         + e7 * (h6 * huv - 2.0 * h5 * uv))
    return L, M, N


def lmn_scalar(u: float, v: float, eps: float, bump: BumpFunction):
    """Plain-float (L, M, N) for integration hot loops."""
    h, hu, hv, huu, huv, hvv = bump.jet_scalar(u, v)
    return _lmn_poly(h, hu, hv, huu, huv, hvv, eps)


def lmn_normalization(u, v, eps: float, bump: BumpFunction):
    """Measured factor polynomial-(L,M,N) / pipeline-(L,M,N).

    Returns (median factor, max relative spread over components/points).
    The expected model is +4 (1+eps^2 h^2)^4 sqrt(EG-F^2); the sign is
    part of the measurement.
    """
    jet = deformed(u, v, eps, bump)
    pipe = lmn_from_forms(FormCoefficients(*first_form(jet), *second_form_s3(jet)))
    poly = lmn_closed_form(u, v, eps, bump)
    nums, dens = [], []
    for a, b in ((poly.L, pipe.L), (poly.M, pipe.M), (poly.N, pipe.N)):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        keep = np.abs(b) > 1e-9
        nums.append(a[keep])
        dens.append(b[keep])
    ratios = np.concatenate(nums) / np.concatenate(dens)
    med = float(np.median(ratios))
    spread = float((np.max(ratios) - np.min(ratios)) / abs(med))
    return med, spread


def principal_directions(fc: FieldCoefficients, umbilic_tol: float = UMBILIC_TOL):
    """The two projective roots of L dv^2 + M du dv + N du^2 = 0.

    Returns (d1, d2) with d1 the branch continuous with (du:dv) = (1:0)
    at eps = 0 (the smaller-slope root) and d2 the other; each is a unit
    (du, dv) array of shape (..., 2), defined up to sign.  The pairing
    q = -(M + sign(M) sqrt(M^2-4LN))/2, roots {N/q, q/L}, avoids
    cancellation; L -> 0 yields (0:1) exactly for the second root.
    """
    L = np.asarray(fc.L, dtype=float)
    M = np.asarray(fc.M, dtype=float)
    N = np.asarray(fc.N, dtype=float)
    scale = np.maximum(np.abs(L), np.maximum(np.abs(M), np.abs(N)))
    if np.any(scale < umbilic_tol):
        raise UmbilicError("principal directions undefined: |L|,|M|,|N| all below tol")
    delta = M * M - 4.0 * L * N
    if np.any(delta < 0.0):
        raise UmbilicError("negative discriminant: no real principal directions")
    s = np.sqrt(delta)
    q = -0.5 * (M + np.where(M >= 0.0, s, -s))
    d1 = np.stack(np.broadcast_arrays(q, N), axis=-1)
    d2 = np.stack(np.broadcast_arrays(L, q), axis=-1)
    d1 = d1 / np.linalg.norm(d1, axis=-1, keepdims=True)
    d2 = d2 / np.linalg.norm(d2, axis=-1, keepdims=True)
    return d1, d2


def select_branch(dirs, branch: Branch, prev=None):
    """Pick one direction of the pair and orient it.

    Without ``prev``: FIRST picks the direction closest to (1:0), SECOND
    the one closest to (0:1), signed toward +u / +v respectively.  With
    ``prev``: picks the direction with larger |cos| against prev and
    aligns the sign so the inner product with prev is >= 0.
    """
    d1, d2 = dirs
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    if prev is None:
        ref = np.array([1.0, 0.0]) if branch is Branch.FIRST else np.array([0.0, 1.0])
    else:
        ref = np.asarray(prev, dtype=float)
    c1 = np.abs(np.sum(d1 * ref, axis=-1))
    c2 = np.abs(np.sum(d2 * ref, axis=-1))
    if prev is not None and np.any(np.abs(c1 - c2) < 1e-12):
        raise AmbiguousBranchError("both directions make equal angle with prev")
    pick = np.where((c1 >= c2)[..., None], d1, d2)
    sign = np.sign(np.sum(pick * ref, axis=-1))
    sign = np.where(sign == 0.0, 1.0, sign)
    return pick * sign[..., None]


def direction_angle(d1, d2):
    """Unoriented angle between projective directions, in radians.

    atan2 of cross against dot keeps full precision near zero, where an
    arccos formulation loses half the significant digits.
    """
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    cross = np.abs(d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0])
    dot = np.abs(np.sum(d1 * d2, axis=-1))
    return np.arctan2(cross, dot)


def umbilic_scan(eps: float, bump: BumpFunction, grid_n: int):
    """Scan the canonical grid for near-umbilic behavior.

    Returns (min delta, min over the grid of max(|L|,|M|,|N|), argmin point).
    """
    if grid_n < 16:
        raise ValueError("grid_n must be >= 16")
    g = np.arange(grid_n) * (2.0 * np.pi / grid_n)
    U, V = np.meshgrid(g, g, indexing="ij")
    fc = lmn_closed_form(U, V, eps, bump)
    delta = np.asarray(fc.delta)
    mag = np.maximum(np.abs(fc.L), np.maximum(np.abs(fc.M), np.abs(fc.N)))
    k = np.unravel_index(np.argmin(mag), mag.shape)
    return float(delta.min()), float(mag.min()), (float(U[k]), float(V[k]))


@dataclass(frozen=True)
class ConsistencyResult:
    poly_identity_rel: float
    root_angle_max: float


def consistency_check(u, v, eps: float, bump: BumpFunction) -> ConsistencyResult:
    """Two independent routes to the same field.

    (1) polynomial identity: (L, M, N) must equal
        -4 (1 + eps^2 h^2)^4 (Fg - Gf, Eg - Ge, Ef - Fe) built from the
        closed-form coefficient display; reported as max relative deviation.
    (2) projective roots of the polynomial field against roots of the
        jet/determinant pipeline; reported as max angle (radians).
    """
    u, v = canonical_angles(u, v)
    poly = lmn_closed_form(u, v, eps, bump)
    h = np.asarray(bump.jet(u, v).h, dtype=float)
    fac = -4.0 * (1.0 + eps * eps * h * h) ** 4
    prod = lmn_from_forms(closed_form_coefficients(u, v, eps, bump))
    scale = np.maximum(np.abs(poly.M), 1.0)
    rel = max(
        float(np.max(np.abs(fac * np.asarray(prod.L) - poly.L) / scale)),
        float(np.max(np.abs(fac * np.asarray(prod.M) - poly.M) / scale)),
        float(np.max(np.abs(fac * np.asarray(prod.N) - poly.N) / scale)),
    )
    jet = deformed(u, v, eps, bump)
    pipe = lmn_from_forms(FormCoefficients(*first_form(jet), *second_form_s3(jet)))
    a1, a2 = principal_directions(poly)
    b1, b2 = principal_directions(pipe)
    ang = max(float(np.max(direction_angle(a1, b1))),
              float(np.max(direction_angle(a2, b2))))
    return ConsistencyResult(rel, ang)
