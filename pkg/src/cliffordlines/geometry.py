"""Clifford torus, its normal field, and the normal-graph deformation.

The undeformed chart is a(u, v) = (sqrt2/2)(cos u, sin u, cos v, sin v)
with unit normal n(u, v) = (sqrt2/2)(-cos u, -sin u, cos v, sin v)
tangent to S^3.  The deformed family is

    a_eps = (a + eps * h * n) / |a + eps * h * n|,

whose chart jets are produced by truncated-Taylor arithmetic pushed
through the quotient; finite differences appear only in the self-check.

Chart arguments are reduced mod 2pi before any trigonometry, which makes
every evaluator exactly doubly periodic (bit-for-bit) in both variables.
Winding bookkeeping is the caller's job (orbits keep their lifts).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bumps import BumpFunction
from .jets import Jet2, var_u, var_v

__all__ = [
    "TWO_PI", "SQRT2_2", "EPS_MAX", "TorusPoint", "SurfaceJet",
    "canonical_angles", "check_epsilon", "clifford", "clifford_normal",
    "deformed", "jet_selfcheck",
]

TWO_PI = 2.0 * np.pi
SQRT2_2 = np.sqrt(2.0) / 2.0

#: Deformations beyond this are not rejected outright, but immersion
#: checks must be run rather than assumed; the CLI enforces it.
EPS_MAX = 0.5


class TorusPoint(NamedTuple):
    """A chart point; u, v live in the universal cover (unbounded)."""

    u: float
    v: float

    def canonical(self) -> "TorusPoint":
        u, v = canonical_angles(self.u, self.v)
        return TorusPoint(float(u), float(v))


def canonical_angles(u, v):
    """Floored modulo into [0, 2pi) x [0, 2pi); idempotent."""
    return np.mod(u, TWO_PI), np.mod(v, TWO_PI)


def check_epsilon(eps: float, eps_max: float = EPS_MAX) -> float:
    eps = float(eps)
    if not np.isfinite(eps) or abs(eps) >= eps_max:
        raise ValueError(f"|eps| must be < {eps_max}; got {eps}")
    return eps


@dataclass(frozen=True)
class SurfaceJet:
    """Chart map value and partials through second order, in R^4.

    Component arrays have shape (..., 4) so whole grids evaluate at once.
    """

    p: np.ndarray
    du: np.ndarray
    dv: np.ndarray
    duu: np.ndarray
    duv: np.ndarray
    dvv: np.ndarray

    def sphere_residual(self):
        """max over points of | |p| - 1 |, |<p, du>|, |<p, dv>|."""
        n = np.abs(np.sqrt(np.sum(self.p * self.p, axis=-1)) - 1.0)
        a = np.abs(np.sum(self.p * self.du, axis=-1))
        b = np.abs(np.sum(self.p * self.dv, axis=-1))
        return float(np.max(np.maximum(n, np.maximum(a, b))))


def _pack(components: list[Jet2]) -> SurfaceJet:
    grab = lambda slot: np.stack([np.asarray(getattr(c, slot), dtype=float)
                                  for c in components], axis=-1)
    return SurfaceJet(grab("f"), grab("fu"), grab("fv"),
                      grab("fuu"), grab("fuv"), grab("fvv"))


def _trig_jets(u, v):
    U, V = var_u(u), var_v(v)
    return U.cos(), U.sin(), V.cos(), V.sin()


def clifford(u, v) -> SurfaceJet:
    """Jet of the undeformed torus chart."""
    u, v = canonical_angles(u, v)
    cu, su, cv, sv = _trig_jets(u, v)
    return _pack([SQRT2_2 * cu, SQRT2_2 * su, SQRT2_2 * cv, SQRT2_2 * sv])


def clifford_normal(u, v) -> np.ndarray:
    """Unit normal of the Clifford torus tangent to S^3, shape (..., 4)."""
    u, v = canonical_angles(u, v)
    return SQRT2_2 * np.stack(
        [-np.cos(u), -np.sin(u), np.cos(v), np.sin(v)], axis=-1)


def _normal_jets(u, v) -> list[Jet2]:
    cu, su, cv, sv = _trig_jets(u, v)
    return [-SQRT2_2 * cu, -SQRT2_2 * su, SQRT2_2 * cv, SQRT2_2 * sv]


def deformed(u, v, eps: float, bump: BumpFunction) -> SurfaceJet:
    """Jet of a_eps = (a + eps h n)/|a + eps h n|.

    |a + eps h n|^2 = 1 + eps^2 h^2 because n is a unit field orthogonal
    to a; the norm is nevertheless computed from the jets themselves so
    the identity stays a testable consequence, not an assumption.
    """
    u, v = canonical_angles(u, v)
    if eps == 0.0:
        return clifford(u, v)
    cu, su, cv, sv = _trig_jets(u, v)
    alpha = [SQRT2_2 * cu, SQRT2_2 * su, SQRT2_2 * cv, SQRT2_2 * sv]
    normal = [-SQRT2_2 * cu, -SQRT2_2 * su, SQRT2_2 * cv, SQRT2_2 * sv]
    bj = bump.jet(u, v)
    h = Jet2(np.asarray(bj.h, dtype=float), bj.hu, bj.hv, bj.huu, bj.huv, bj.hvv)
    eh = eps * h
    w = [alpha[i] + eh * normal[i] for i in range(4)]
    norm2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3]
    inv = norm2.inv_sqrt()
    return _pack([w[i] * inv for i in range(4)])


def deformation_norm_squared(u, v, eps: float, bump: BumpFunction):
    """|a + eps h n|^2, from the raw sum of squares (pre-normalization)."""
    u, v = canonical_angles(u, v)
    bj = bump.jet(u, v)
    h = Jet2(np.asarray(bj.h, dtype=float), bj.hu, bj.hv, bj.huu, bj.huv, bj.hvv)
    cu, su, cv, sv = _trig_jets(u, v)
    alpha = [SQRT2_2 * cu, SQRT2_2 * su, SQRT2_2 * cv, SQRT2_2 * sv]
    normal = [-SQRT2_2 * cu, -SQRT2_2 * su, SQRT2_2 * cv, SQRT2_2 * sv]
    eh = eps * h
    w = [alpha[i] + eh * normal[i] for i in range(4)]
    return (w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3]).f


def jet_selfcheck(u, v, eps: float, bump: BumpFunction, step: float,
                  richardson: bool = False) -> float:
    """Compare analytic jet partials against central differences of the value.

    Plain stencils are second order in ``step``; with ``richardson`` each
    stencil is extrapolated once (order four), which is needed to push
    trigonometric-jet residuals below the float64 second-difference floor.
    Returns the max absolute residual over all ten derivative components.
    """
    if not 0.0 < step <= 1e-2:
        raise ValueError("step must lie in (0, 1e-2]")

    value = lambda uu, vv: deformed(uu, vv, eps, bump).p

    def stencils(s):
        pc = value(u, v)
        pu1, pu2 = value(u + s, v), value(u - s, v)
        pv1, pv2 = value(u, v + s), value(u, v - s)
        ppp = value(u + s, v + s)
        ppm = value(u + s, v - s)
        pmp = value(u - s, v + s)
        pmm = value(u - s, v - s)
        return {
            "du": (pu1 - pu2) / (2 * s),
            "dv": (pv1 - pv2) / (2 * s),
            "duu": (pu1 - 2 * pc + pu2) / (s * s),
            "dvv": (pv1 - 2 * pc + pv2) / (s * s),
            "duv": (ppp - ppm - pmp + pmm) / (4 * s * s),
        }

    fd = stencils(step)
    if richardson:
        half = stencils(step / 2.0)
        fd = {k: (4.0 * half[k] - fd[k]) / 3.0 for k in fd}

    jet = deformed(u, v, eps, bump)
    res = 0.0
    for k in fd:
        res = max(res, float(np.max(np.abs(fd[k] - getattr(jet, k)))))
    return res
