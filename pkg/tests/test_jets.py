"""Truncated-Taylor arithmetic against finite differences."""

import numpy as np

from cliffordlines import Jet2, var_u, var_v


def sample_expr(u, v):
    U, V = var_u(u), var_v(v)
    return (U.sin() * V.cos() + (U * V).sin()) / (2.0 + (U + V).cos()).sqrt()


def scalar_expr(u, v):
    return (np.sin(u) * np.cos(v) + np.sin(u * v)) / np.sqrt(2.0 + np.cos(u + v))


def test_jet_matches_finite_differences():
    u0, v0, s = 0.7, 1.3, 1e-5
    jet = sample_expr(u0, v0)
    f = scalar_expr
    assert abs(jet.f - f(u0, v0)) < 1e-15
    assert abs(jet.fu - (f(u0 + s, v0) - f(u0 - s, v0)) / (2 * s)) < 1e-9
    assert abs(jet.fv - (f(u0, v0 + s) - f(u0, v0 - s)) / (2 * s)) < 1e-9
    s = 1e-4
    assert abs(jet.fuu - (f(u0 + s, v0) - 2 * f(u0, v0) + f(u0 - s, v0)) / s**2) < 1e-6
    assert abs(jet.fvv - (f(u0, v0 + s) - 2 * f(u0, v0) + f(u0, v0 - s)) / s**2) < 1e-6
    mixed = (f(u0 + s, v0 + s) - f(u0 + s, v0 - s)
             - f(u0 - s, v0 + s) + f(u0 - s, v0 - s)) / (4 * s * s)
    assert abs(jet.fuv - mixed) < 1e-6


def test_product_and_quotient_rules():
    U, V = var_u(0.4), var_v(2.2)
    a = U.sin() * V.sin() + 3.0
    b = U.cos() + V.cos() + 4.0
    prod = a * b
    back = prod / b
    for slot in ("f", "fu", "fv", "fuu", "fuv", "fvv"):
        assert abs(getattr(back, slot) - getattr(a, slot)) < 1e-13


def test_vectorized_slots_broadcast():
    u = np.linspace(0.0, 6.0, 11)
    v = np.linspace(0.0, 6.0, 11)
    jet = sample_expr(u, v)
    assert jet.f.shape == (11,)
    one = sample_expr(u[3], v[3])
    assert np.allclose(jet.fuv[3], one.fuv, rtol=0, atol=1e-15)


def test_sqrt_inverse_consistency():
    U, V = var_u(1.1), var_v(0.3)
    w = 2.0 + (U * V).sin()
    ident = w.sqrt() * w.inv_sqrt() * w
    for slot, want in (("f", w.f), ("fu", w.fu), ("fuv", w.fuv)):
        assert abs(getattr(ident, slot) - want) < 1e-13


def test_constant_jet_arithmetic():
    c = Jet2(3.0)
    U = var_u(0.5)
    out = c * U + 1.0
    assert out.f == 2.5
    assert out.fu == 3.0
    assert out.fvv == 0.0
