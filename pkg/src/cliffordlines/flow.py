"""Orbits of the principal line fields, return maps, rotation numbers.

Integration runs in graph form wherever the transverse slope is small
(dv/du for the first branch, du/dv for the second), falling back to
arc-length parametrization past ``SLOPE_CAP``.  The independent variable
carries the lift, so winding is bookkept exactly and canonicalization
happens only at output time.

The production line field is the closed-form polynomial set (fast scalar
path); ``field_source="pipeline"`` drives the same integrator from the
jet/determinant route instead, which the test suite uses to cross-check
whole orbits between the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .bumps import BumpFunction
from .errors import NoBracketError, NumericalError, StepCollapseError, TangencyError
from .field import (Branch, FieldCoefficients, lmn_from_forms, lmn_scalar,
                    principal_directions, select_branch)
from .forms import first_form, second_form_s3, FormCoefficients
from .geometry import TWO_PI, canonical_angles, deformed

__all__ = [
    "SLOPE_CAP", "TRANS_TOL", "DEFAULT_TOL", "SectionSpec", "Orbit",
    "RotationEstimate", "slope_function", "integrate_orbit", "section_crossing",
    "poincare_u0", "poincare_v0", "poincare_diag", "first_branch_solution",
    "rotation_number", "epsilon_scan", "coverage_fraction",
]

SLOPE_CAP = 10.0
TRANS_TOL = 1e-6
DEFAULT_TOL = 1e-10
_CROSSING_RESIDUAL = 1e-12


@dataclass(frozen=True)
class SectionSpec:
    """kind is "u0" (circle u = 0 mod 2pi), "v0" (its mirror), or "diagonal"."""

    kind: str = "u0"

    def __post_init__(self):
        if self.kind not in ("u0", "v0", "diagonal"):
            raise ValueError(f"unknown section kind {self.kind!r}")


@dataclass(frozen=True)
class RotationEstimate:
    rho: float
    n: int
    err: float
    eps: float
    branch: Branch
    section: str


@dataclass
class Orbit:
    """Sampled lifted trajectory of one principal branch."""

    branch: Branch
    eps: float
    us: np.ndarray
    vs: np.ndarray
    dirs: np.ndarray
    ts: np.ndarray
    _dense: object = None
    _mode: str = "graph"

    def canonical(self):
        return canonical_angles(self.us, self.vs)


def _small_root(L, M, N):
    """Root of L x^2 + M x + N near -N/M, stable in the L -> 0 limit."""
    disc = M * M - 4.0 * L * N
    s = math.sqrt(disc)
    q = -0.5 * (M + s) if M >= 0.0 else -0.5 * (M - s)
    return N / q


def slope_function(branch: Branch, eps: float, bump: BumpFunction,
                   field_source: str = "closed"):
    """Scalar slope of the branch in its graph variable.

    FIRST: returns p(u, v) = dv/du.  SECOND: returns q(v, u) = du/dv
    (note the argument order follows the independent variable first).
    """
    if field_source == "closed":
        def lmn(u, v):
            return lmn_scalar(u, v, eps, bump)
    elif field_source == "pipeline":
        def lmn(u, v):
            jet = deformed(u, v, eps, bump)
            fc = lmn_from_forms(FormCoefficients(*first_form(jet), *second_form_s3(jet)))
            return float(fc.L), float(fc.M), float(fc.N)
    else:
        raise ValueError(f"unknown field_source {field_source!r}")

    if branch is Branch.FIRST:
        def slope(u, v):
            L, M, N = lmn(u, v)
            return _small_root(L, M, N)
    else:
        def slope(v, u):
            L, M, N = lmn(u, v)
            return _small_root(N, M, L)
    return slope


def _run_ivp(fun, span, y0, tol, events=None, dense=False, t_eval=None):
    sol = solve_ivp(fun, span, y0, method="RK45", rtol=tol,
                    atol=max(tol * 1e-2, 1e-14), dense_output=dense,
                    events=events, t_eval=t_eval)
    if not sol.success:
        msg = sol.message or "integration failed"
        if "step size" in msg.lower():
            raise StepCollapseError(msg)
        raise NumericalError(msg)
    return sol


def integrate_orbit(start, branch: Branch, eps: float, bump: BumpFunction, *,
                    u_span: float = None, v_span: float = None,
                    arc_length: float = None, crossings: int = None,
                    section: SectionSpec = None, tol: float = DEFAULT_TOL,
                    field_source: str = "closed") -> Orbit:
    """Integrate one principal-line orbit from a lifted start point.

    Exactly one stop criterion must be given.  Graph form is used when
    the branch's natural independent variable is the one spanned; any
    other combination runs in arc-length mode.
    """
    u0, v0 = float(start[0]), float(start[1])
    stops = [u_span is not None, v_span is not None,
             arc_length is not None, crossings is not None]
    if sum(stops) != 1:
        raise ValueError("give exactly one of u_span, v_span, arc_length, crossings")

    natural = (branch is Branch.FIRST and u_span is not None) or \
              (branch is Branch.SECOND and v_span is not None)
    if natural:
        return _integrate_graph(u0, v0, branch, eps, bump,
                                u_span if branch is Branch.FIRST else v_span,
                                tol, field_source)
    return _integrate_arc(u0, v0, branch, eps, bump, u_span, v_span,
                          arc_length, crossings, section, tol, field_source)


def _integrate_graph(u0, v0, branch, eps, bump, span, tol, field_source):
    slope = slope_function(branch, eps, bump, field_source)
    sol = _run_ivp(lambda t, y: (slope(t, y[0]),), (u0 if branch is Branch.FIRST else v0,
                   (u0 if branch is Branch.FIRST else v0) + span),
                   [v0 if branch is Branch.FIRST else u0], tol, dense=True)
    t = sol.t
    w = sol.y[0]
    if branch is Branch.FIRST:
        us, vs = t, w
        raw = np.stack([np.ones_like(t), np.array([slope(a, b) for a, b in zip(t, w)])], axis=-1)
    else:
        us, vs = w, t
        raw = np.stack([np.array([slope(a, b) for a, b in zip(t, w)]), np.ones_like(t)], axis=-1)
    dirs = raw / np.linalg.norm(raw, axis=-1, keepdims=True)
    return Orbit(branch, eps, np.asarray(us, dtype=float), np.asarray(vs, dtype=float),
                 dirs, t.astype(float), _dense=sol.sol, _mode="graph")


def _integrate_arc(u0, v0, branch, eps, bump, u_span, v_span, arc_length,
                   crossings, section, tol, field_source):
    """Arc-length fallback: state (u, v), unit-speed along the branch."""
    slope = slope_function(branch, eps, bump, field_source)
    prev = {"d": None}

    def rhs(t, y):
        u, v = y
        if branch is Branch.FIRST:
            p = slope(u, v)
            d = np.array([1.0, p]) if abs(p) <= SLOPE_CAP else None
        else:
            q = slope(v, u)
            d = np.array([q, 1.0]) if abs(q) <= SLOPE_CAP else None
        if d is None:
            # past the cap: fall back to the full direction pair
            L, M, N = lmn_scalar(u, v, eps, bump)
            d1, d2 = principal_directions(FieldCoefficients(L, M, N))
            d = select_branch((d1, d2), branch, prev=prev["d"])
        else:
            d = d / np.linalg.norm(d)
            if prev["d"] is not None and float(np.dot(d, prev["d"])) < 0.0:
                d = -d
        prev["d"] = d
        return d

    events = []
    if u_span is not None:
        ev = lambda t, y: y[0] - (u0 + u_span)
        ev.terminal = True
        events.append(ev)
    if v_span is not None:
        ev = lambda t, y: y[1] - (v0 + v_span)
        ev.terminal = True
        events.append(ev)
    if crossings is not None:
        events.append(_section_event(section or SectionSpec("diagonal"),
                                     terminal=crossings))
    t_end = arc_length if arc_length is not None else 64.0 * TWO_PI
    sol = _run_ivp(rhs, (0.0, t_end), [u0, v0], tol, events=events, dense=True)
    if arc_length is None and sol.status != 1:
        raise NumericalError("stop criterion not reached within the arc budget")
    us, vs = sol.y
    t = sol.t
    dirs = np.array([rhs(tt, yy) for tt, yy in zip(t, sol.y.T)])
    return Orbit(branch, eps, us.astype(float), vs.astype(float), dirs,
                 t.astype(float), _dense=sol.sol, _mode="arc")


def _section_event(section: SectionSpec, terminal=False):
    """Smooth event function vanishing exactly on the section's lifts."""
    if section.kind == "u0":
        f = lambda t, y: math.sin(0.5 * y[0])
    elif section.kind == "v0":
        f = lambda t, y: math.sin(0.5 * y[1])
    else:
        f = lambda t, y: math.sin(0.5 * (y[1] - y[0]))
    f.terminal = terminal
    return f


def section_crossing(dense, t_lo: float, t_hi: float, section: SectionSpec,
                     residual_fn=None, tol: float = _CROSSING_RESIDUAL):
    """Locate a section crossing bracketed by [t_lo, t_hi] on a dense orbit.

    ``dense`` maps t to the lifted state (u, v).  Root-finding (brentq,
    then a Newton polish on the interpolant) drives the section residual
    below ``tol`` in chart units; raises NoBracketError or TangencyError.
    """
    if residual_fn is None:
        if section.kind == "u0":
            residual_fn = lambda y: math.sin(0.5 * y[0])
        elif section.kind == "v0":
            residual_fn = lambda y: math.sin(0.5 * y[1])
        else:
            residual_fn = lambda y: math.sin(0.5 * (y[1] - y[0]))

    g = lambda t: residual_fn(np.atleast_1d(np.asarray(dense(t), dtype=float)))
    glo, ghi = g(t_lo), g(t_hi)
    if glo == 0.0:
        t_star = t_lo
    elif ghi == 0.0:
        t_star = t_hi
    elif glo * ghi > 0.0:
        raise NoBracketError("no sign change of the section residual in the bracket")
    else:
        t_star = brentq(g, t_lo, t_hi, xtol=1e-15, rtol=8.9e-16)
    # Newton polish on the interpolant
    dt = max(1e-9, 1e-9 * abs(t_star))
    for _ in range(3):
        r = g(t_star)
        if abs(r) < tol:
            break
        drdt = (g(t_star + dt) - g(t_star - dt)) / (2.0 * dt)
        if abs(drdt) < TRANS_TOL:
            raise TangencyError("transversality margin below tolerance at crossing")
        t_star -= r / drdt
    if abs(g(t_star)) >= tol:
        raise TangencyError("crossing residual did not converge below tolerance")
    uv = np.asarray(dense(t_star), dtype=float)
    return float(t_star), (float(uv[0]), float(uv[1]))


def first_branch_solution(v0: float, eps: float, bump: BumpFunction,
                          u_end: float, tol: float = DEFAULT_TOL,
                          field_source: str = "closed") -> float:
    """v(u_end, v0, eps): the first-branch graph solution from (0, v0)."""
    if u_end == 0.0:
        return float(v0)
    slope = slope_function(Branch.FIRST, eps, bump, field_source)
    sol = _run_ivp(lambda u, y: (slope(u, y[0]),), (0.0, u_end), [v0], tol)
    return float(sol.y[0, -1])


def poincare_u0(v0: float, eps: float, bump: BumpFunction,
                tol: float = DEFAULT_TOL, field_source: str = "closed") -> float:
    """First-branch return to {u = 0}: the lifted v after u advances 2pi."""
    return first_branch_solution(v0, eps, bump, TWO_PI, tol, field_source)


def poincare_v0(u0: float, eps: float, bump: BumpFunction,
                tol: float = DEFAULT_TOL, field_source: str = "closed") -> float:
    """Second-branch return to {v = 0}: the lifted u after v advances 2pi."""
    if eps == 0.0:
        return float(u0)
    slope = slope_function(Branch.SECOND, eps, bump, field_source)
    sol = _run_ivp(lambda v, y: (slope(v, y[0]),), (0.0, TWO_PI), [u0], tol)
    return float(sol.y[0, -1])


def poincare_diag(s0: float, eps: float, bump: BumpFunction, branch: Branch,
                  tol: float = DEFAULT_TOL, field_source: str = "closed") -> float:
    """First return to the diagonal circle {(s, s)}.

    The return parameter is the lifted u-coordinate of the crossing, a
    valid lift of the circle map on the diagonal for either branch.  The
    crossing is transversal whenever the graph slope stays away from 1.
    """
    slope = slope_function(branch, eps, bump, field_source)
    offs = TWO_PI  # first lift translate met when the slope magnitude is < 1

    if branch is Branch.FIRST:
        def ev(u, y):
            return (y[0] - u) + offs
    else:
        def ev(v, y):
            return (v - y[0]) - offs
    ev.terminal = True

    t0 = s0
    sol = _run_ivp(lambda t, y: (slope(t, y[0]),), (t0, t0 + 4.0 * TWO_PI),
                   [s0], tol, events=[ev], dense=True)
    if sol.status != 1 or len(sol.t_events[0]) == 0:
        raise NoBracketError("no diagonal crossing within four periods")
    t_star = float(sol.t_events[0][0])
    w_star = float(sol.y_events[0][0][0])
    p = slope(t_star, w_star)
    if abs(p - 1.0) < TRANS_TOL:
        raise TangencyError("orbit tangent to the diagonal at the crossing")
    # lifted u at the crossing
    return t_star if branch is Branch.FIRST else w_star


def rotation_number(eps: float, bump: BumpFunction, branch: Branch,
                    section: SectionSpec = SectionSpec("u0"), n: int = 2000,
                    tol: float = DEFAULT_TOL, start: float = 0.0,
                    field_source: str = "closed") -> RotationEstimate:
    """Mean lift displacement per return over n returns, divided by 2pi.

    err is the worst-case single-return spread (max - min)/(2pi n), the
    classical a-posteriori bound for circle-map rotation numbers.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if section.kind == "u0" and branch is not Branch.FIRST:
        raise ValueError("section u0 is a leaf of the second foliation; use v0")
    if section.kind == "v0" and branch is not Branch.SECOND:
        raise ValueError("section v0 is a leaf of the first foliation; use u0")

    if section.kind in ("u0", "v0"):
        if eps == 0.0:
            return RotationEstimate(0.0, n, 0.0, eps, branch, section.kind)
        slope = slope_function(branch, eps, bump, field_source)
        span = TWO_PI * n
        sol = _run_ivp(lambda t, y: (slope(t, y[0]),), (0.0, span), [start], tol,
                       t_eval=TWO_PI * np.arange(n + 1))
        lifts = sol.y[0]
        disp = np.diff(lifts)
    else:
        s = start
        lifts = [s]
        for _ in range(n):
            s = poincare_diag(s, eps, bump, branch, tol, field_source)
            lifts.append(s)
        lifts = np.asarray(lifts)
        disp = np.diff(lifts)
    rho = float((lifts[-1] - lifts[0]) / (TWO_PI * n))
    err = float((np.max(disp) - np.min(disp)) / (TWO_PI * n)) if n > 1 else float("inf")
    return RotationEstimate(rho, n, err, eps, branch, section.kind)


def _rational_distance(x: float, qmax: int) -> float:
    """Distance from x to the nearest p/q with 1 <= q <= qmax."""
    best = float("inf")
    for q in range(1, qmax + 1):
        p = round(x * q)
        best = min(best, abs(x - p / q))
    return best


def epsilon_scan(eps_values, bump: BumpFunction, n: int = 500, qmax: int = 20,
                 tol: float = DEFAULT_TOL, start: float = 0.0):
    """Rotation numbers of both branches across eps, plus a pick of eps0.

    For each eps the margin is the distance of rho to the rationals with
    denominator <= qmax, minus the rotation-number error estimate; eps0
    maximizes the smaller of the two branch margins.
    """
    if qmax < 2:
        raise ValueError("qmax must be >= 2")
    records = []
    for eps in eps_values:
        r1 = rotation_number(eps, bump, Branch.FIRST, SectionSpec("u0"), n, tol, start)
        r2 = rotation_number(eps, bump, Branch.SECOND, SectionSpec("v0"), n, tol, start)
        m1 = _rational_distance(r1.rho, qmax) - r1.err
        m2 = _rational_distance(r2.rho, qmax) - r2.err
        records.append({
            "eps": float(eps),
            "rho_first": r1.rho, "err_first": r1.err,
            "rho_second": r2.rho, "err_second": r2.err,
            "margin": min(m1, m2),
        })
    selected = max(records, key=lambda r: r["margin"])["eps"] if records else None
    return records, selected


def coverage_fraction(orbit: Orbit, cells: int) -> float:
    """Fraction of a cells x cells partition of the canonical torus visited.

    Samples are densified through the orbit's dense interpolant so that
    consecutive points land in the same or an adjacent cell.
    """
    if cells < 1:
        raise ValueError("cells must be >= 1")
    cell = TWO_PI / cells
    if orbit._dense is not None:
        t0, t1 = float(orbit.ts[0]), float(orbit.ts[-1])
        if orbit._mode == "arc":
            speed = 1.0
        else:
            along = orbit.dirs[:, 0] if orbit.branch is Branch.FIRST else orbit.dirs[:, 1]
            transverse = orbit.dirs[:, 1] if orbit.branch is Branch.FIRST else orbit.dirs[:, 0]
            speed = 1.0 + float(np.max(np.abs(transverse / along)))
        step = cell / (3.0 * speed)
        ts = np.arange(t0, t1, step)
        states = orbit._dense(ts)
        if orbit._mode == "arc":
            us, vs = states[0], states[1]
        elif orbit.branch is Branch.FIRST:
            us, vs = ts, states[0]
        else:
            us, vs = states[0], ts
    else:
        us, vs = orbit.us, orbit.vs
    cu, cv = canonical_angles(us, vs)
    iu = np.minimum((cu / cell).astype(int), cells - 1)
    iv = np.minimum((cv / cell).astype(int), cells - 1)
    return float(len(set(zip(iu.tolist(), iv.tolist()))) / (cells * cells))
