"""Bump functions h(u, v) driving the normal deformation of the torus.

A bump supplies analytic partials through third order (h_uvv enters the
second-order perturbation identities).  Implementations must be exactly
2pi-double-periodic.  ``jet_scalar`` exists so tight integration loops can
stay in plain Python floats; the default delegates to the array path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["BumpJet", "BumpFunction", "SinSquaredBump", "ZeroBump", "bump_by_name"]


@dataclass(frozen=True)
class BumpJet:
    """h and its partials at a point (arrays broadcast like the inputs)."""

    h: np.ndarray | float
    hu: np.ndarray | float
    hv: np.ndarray | float
    huu: np.ndarray | float
    huv: np.ndarray | float
    hvv: np.ndarray | float
    huvv: np.ndarray | float


class BumpFunction:
    """Base class; subclasses implement ``jet``."""

    #: True when h(u, v) == h(v, u) for all points.
    symmetric: bool = False
    name: str = "bump"

    def jet(self, u, v) -> BumpJet:
        raise NotImplementedError

    def jet_scalar(self, u: float, v: float) -> tuple:
        """(h, hu, hv, huu, huv, hvv) as plain floats, for hot loops."""
        j = self.jet(u, v)
        return (float(j.h), float(j.hu), float(j.hv),
                float(j.huu), float(j.huv), float(j.hvv))

    def __call__(self, u, v) -> BumpJet:
        return self.jet(u, v)


class SinSquaredBump(BumpFunction):
    """h(u, v) = sin^2(u + v) = (1 - cos(2u + 2v))/2."""

    symmetric = True
    name = "sin2_uv"

    def jet(self, u, v):
        w = 2.0 * (np.asarray(u, dtype=float) + np.asarray(v, dtype=float))
        c, s = np.cos(w), np.sin(w)
        return BumpJet(0.5 * (1.0 - c), s, s, 2.0 * c, 2.0 * c, 2.0 * c, -4.0 * s)

    def jet_scalar(self, u, v):
        w = 2.0 * (u + v)
        c, s = math.cos(w), math.sin(w)
        c2 = 2.0 * c
        return (0.5 * (1.0 - c), s, s, c2, c2, c2)


class ZeroBump(BumpFunction):
    """h identically zero: the undeformed torus."""

    symmetric = True
    name = "zero"

    def jet(self, u, v):
        z = np.zeros(np.broadcast(np.asarray(u), np.asarray(v)).shape)
        return BumpJet(z, z, z, z, z, z, z)

    def jet_scalar(self, u, v):
        return (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


_BUILTIN = {"sin2_uv": SinSquaredBump, "zero": ZeroBump}


def bump_by_name(name: str) -> BumpFunction:
    try:
        return _BUILTIN[name]()
    except KeyError:
        raise KeyError(f"unknown bump function {name!r}; choices: {sorted(_BUILTIN)}") from None
