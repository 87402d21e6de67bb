"""Variational identities and closed-form expansions against the flow."""

import math

import numpy as np
import pytest

from cliffordlines import (ZeroBump, closed_form_scale, displacement_fit,
                           fd_v_derivatives, v_eps_closed, v_epseps_closed,
                           variational_residual)

TWO_PI = 2.0 * math.pi


def test_v_eps_closed_zeros():
    for v0 in np.linspace(0, TWO_PI, 9):
        assert v_eps_closed(0.0, v0) == 0.0
        assert abs(v_eps_closed(TWO_PI, v0)) < 1e-14
    assert abs(v_eps_closed(math.pi / 2, 0.0)) < 1e-15


def test_v_epseps_closed_initial_value_and_drift():
    for v0 in np.linspace(0, TWO_PI, 9):
        assert abs(v_epseps_closed(0.0, v0)) < 1e-14
        drift = v_epseps_closed(TWO_PI, v0) - v_epseps_closed(0.0, v0)
        assert abs(drift + 3.0 * math.pi) < 1e-12


def test_v_epseps_closed_linear_slope():
    # only the -(3/2)u term survives over a full period, at any base point
    for u in (0.3, 2.0, 5.5):
        drift = v_epseps_closed(u + TWO_PI, 0.7) - v_epseps_closed(u, 0.7)
        assert abs(drift + 3.0 * math.pi) < 1e-12


def test_fd_first_derivative_vanishes_over_period():
    for v0 in (0.7, 2.1):
        d1, _ = fd_v_derivatives(TWO_PI, v0, 1e-3)
        assert abs(d1) < 1e-5


def test_fd_first_derivative_scales_quadratically():
    d1a, _ = fd_v_derivatives(TWO_PI, 0.0, 2e-3)
    d1b, _ = fd_v_derivatives(TWO_PI, 0.0, 1e-3)
    assert 3.5 < d1a / d1b < 4.5


def test_fd_second_derivative_measures_minus_six_pi():
    _, d2 = fd_v_derivatives(TWO_PI, 0.4, 3e-3)
    assert abs(d2 + 6.0 * math.pi) < 1e-2


@pytest.mark.xfail(strict=True, reason="the quoted -3pi period drift halves "
                   "the measured value; see the decisions ledger")
def test_fd_second_derivative_against_quoted_minus_three_pi():
    _, d2 = fd_v_derivatives(TWO_PI, 0.4, 3e-3)
    assert abs(d2 + 3.0 * math.pi) < 1e-2


def test_fd_matches_v_eps_closed_pointwise():
    s = 1e-3
    for u in (math.pi / 3, 2.0, 5.0):
        for v0 in (0.2, 1.1, 3.9):
            d1, _ = fd_v_derivatives(u, v0, s)
            want = float(v_eps_closed(u, v0))
            assert abs(abs(d1) - abs(want)) < 1e-4
            if abs(want) > 0.1:     # sign is part of the measurement
                assert d1 * want > 0.0


def test_fd_validation():
    with pytest.raises(ValueError):
        fd_v_derivatives(1.0, 0.0, 1e-5)
    with pytest.raises(ValueError):
        fd_v_derivatives(1.0, 0.0, 1e-3, tol=1e-9)


def test_variational_first_order_normalization():
    for u, v0 in ((1.0, 0.3), (2.5, 1.8), (4.0, 0.9)):
        res = variational_residual(u, v0, "first")
        assert res.tag == "a-2b-c"
        assert res.residual < 1e-5
        # the wrong bookkeeping misses by the full coefficient size
        assert res.other_residual > 0.1


def test_variational_second_order_normalization():
    res = variational_residual(1.0, 0.3, "second", eps_step=3e-3)
    assert res.tag == "a-2b-c"
    assert res.residual < 1e-3
    assert res.other_residual > 0.1


def test_variational_residual_zero_bump():
    zero = ZeroBump()
    for mode in ("first", "second"):
        res = variational_residual(1.0, 0.3, mode, bump=zero)
        assert res.residual == 0.0
        assert res.other_residual == 0.0


def test_variational_mode_validation():
    with pytest.raises(ValueError):
        variational_residual(1.0, 0.3, "third")


def test_closed_form_scale_is_two():
    scale, residual = closed_form_scale(TWO_PI, 0.4)
    assert scale == 2
    assert residual < 1e-2


def test_displacement_fit_measures_minus_three_pi():
    c2, dev_from_quoted = displacement_fit([0.01, 0.02, 0.04])
    assert abs(c2 + 3.0 * math.pi) < 0.02 * 3.0 * math.pi
    # returned deviation is against the quoted -3pi/2 target
    assert abs(dev_from_quoted - (c2 + 1.5 * math.pi)) < 1e-14


@pytest.mark.xfail(strict=True, reason="the quoted return-map coefficient "
                   "-3pi/2 is half the measured one; see the decisions ledger")
def test_displacement_fit_against_quoted_coefficient():
    c2, _ = displacement_fit([0.01, 0.02, 0.04])
    assert abs(c2 + 1.5 * math.pi) < 0.02 * 1.5 * math.pi


def test_displacement_fit_zero_eps_is_inert():
    a, _ = displacement_fit([0.01, 0.02, 0.04])
    b, _ = displacement_fit([0.0, 0.01, 0.02, 0.04])
    assert abs(a - b) < 1e-12


def test_displacement_fit_start_independent():
    a, _ = displacement_fit([0.01, 0.02, 0.04], v0=0.0)
    b, _ = displacement_fit([0.01, 0.02, 0.04], v0=1.0)
    assert abs(a - b) < 0.05


def test_displacement_fit_validation():
    with pytest.raises(ValueError):
        displacement_fit([0.01, 0.01, 0.01])
    with pytest.raises(ValueError):
        displacement_fit([0.01, 0.02, 0.2])
