"""Second-order truncated Taylor arithmetic in two chart variables.

A Jet2 carries a value and its partial derivatives through second order
with respect to (u, v).  Arithmetic propagates derivatives exactly (to
rounding), so chart maps built from jets never need numerical
differencing.  All slots broadcast, so a Jet2 may hold scalars or whole
grids at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Jet2", "var_u", "var_v", "const"]


@dataclass(frozen=True)
class Jet2:
    f: np.ndarray | float
    fu: np.ndarray | float = 0.0
    fv: np.ndarray | float = 0.0
    fuu: np.ndarray | float = 0.0
    fuv: np.ndarray | float = 0.0
    fvv: np.ndarray | float = 0.0

    def __add__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.f + other, self.fu, self.fv, self.fuu, self.fuv, self.fvv)
        return Jet2(
            self.f + other.f,
            self.fu + other.fu,
            self.fv + other.fv,
            self.fuu + other.fuu,
            self.fuv + other.fuv,
            self.fvv + other.fvv,
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.f, -self.fu, -self.fv, -self.fuu, -self.fuv, -self.fvv)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet2) else Jet2(-other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(
                self.f * other, self.fu * other, self.fv * other,
                self.fuu * other, self.fuv * other, self.fvv * other,
            )
        a, b = self, other
        return Jet2(
            a.f * b.f,
            a.fu * b.f + a.f * b.fu,
            a.fv * b.f + a.f * b.fv,
            a.fuu * b.f + 2.0 * a.fu * b.fu + a.f * b.fuu,
            a.fuv * b.f + a.fu * b.fv + a.fv * b.fu + a.f * b.fuv,
            a.fvv * b.f + 2.0 * a.fv * b.fv + a.f * b.fvv,
        )

    __rmul__ = __mul__

    def compose(self, c0, c1, c2):
        """Jet of F(self) given c0 = F(f), c1 = F'(f), c2 = F''(f)."""
        return Jet2(
            c0,
            c1 * self.fu,
            c1 * self.fv,
            c2 * self.fu * self.fu + c1 * self.fuu,
            c2 * self.fu * self.fv + c1 * self.fuv,
            c2 * self.fv * self.fv + c1 * self.fvv,
        )

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            return self * (1.0 / other)
        x = other.f
        return self * other.compose(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))

    def sqrt(self):
        s = np.sqrt(self.f)
        return self.compose(s, 0.5 / s, -0.25 / (s * self.f))

    def inv_sqrt(self):
        x = self.f
        s = 1.0 / np.sqrt(x)
        return self.compose(s, -0.5 * s / x, 0.75 * s / (x * x))

    def sin(self):
        s, c = np.sin(self.f), np.cos(self.f)
        return self.compose(s, c, -s)

    def cos(self):
        s, c = np.sin(self.f), np.cos(self.f)
        return self.compose(c, -s, -c)


def var_u(u):
    """Jet of the chart coordinate u."""
    u = np.asarray(u, dtype=float)
    z = np.zeros_like(u)
    return Jet2(u, np.ones_like(u), z, z, z, z)


def var_v(v):
    """Jet of the chart coordinate v."""
    v = np.asarray(v, dtype=float)
    z = np.zeros_like(v)
    return Jet2(v, z, np.ones_like(v), z, z, z)


def const(c):
    return Jet2(np.asarray(c, dtype=float))
