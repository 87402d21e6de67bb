"""The verification suite: every headline claim, measured and scored.

Each check returns a CheckResult carrying the measured number, the
expectation, the tolerance, and a provenance note.  Checks whose stated
target is contradicted by the measurement (second-order holonomy -3pi,
return-map coefficient -3pi/2, same-parameter reflection conjugacy, and
the step-1e-3 first-order difference bound) are reported twice: once
against the stated target (hard, expected to fail) and once against the
measured truth at the same tolerances.  Soft checks only record.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .bumps import SinSquaredBump
from .field import (Branch, FieldCoefficients, consistency_check, lmn_closed_form,
                    lmn_from_forms, lmn_normalization, principal_directions,
                    umbilic_scan)
from .flow import (SectionSpec, coverage_fraction, epsilon_scan, first_branch_solution,
                   integrate_orbit, poincare_diag, poincare_u0, rotation_number,
                   slope_function)
from .forms import (FormCoefficients, closed_form_coefficients, first_form,
                    second_form_s3, second_form_scale_ratio)
from .geometry import TWO_PI, clifford, deformed
from .meshes import revolution_profile, revolution_residual, torus_mesh, write_obj
from .perturb import (closed_form_scale, displacement_fit, fd_v_derivatives,
                      v_eps_closed, variational_residual)
from .projection import (pole_clearance, principal_match, project_orbit,
                         tangent_distortion)

__all__ = ["CheckResult", "VerificationReport", "run_verification"]

_BUMP = SinSquaredBump()


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    expected: str
    tol: float
    passed: bool
    hard: bool = True
    note: str = ""


@dataclass
class VerificationReport:
    results: list = field(default_factory=list)
    tags: dict = field(default_factory=dict)

    def add(self, r: CheckResult):
        self.results.append(r)

    @property
    def hard_failures(self):
        return [r for r in self.results if r.hard and not r.passed]

    def to_dict(self):
        return {
            "checks": [
                {"name": r.name, "measured": r.measured, "expected": r.expected,
                 "tol": r.tol, "passed": r.passed, "hard": r.hard, "note": r.note}
                for r in self.results
            ],
            "tags": self.tags,
            "all_hard_passed": not self.hard_failures,
        }

    def lines(self):
        out = []
        for r in self.results:
            status = "PASS" if r.passed else ("FAIL" if r.hard else "note")
            out.append(f"[{status}] {r.name}: measured={r.measured!r} "
                       f"expected {r.expected} (tol={r.tol!r})"
                       + (f"  -- {r.note}" if r.note else ""))
        for k, v in self.tags.items():
            out.append(f"[tag ] {k} = {v}")
        out.append("overall: " + ("all hard checks passed"
                                  if not self.hard_failures else
                                  f"{len(self.hard_failures)} hard check(s) failed"))
        return out


def _grid(n, offset=0.0):
    g = offset + np.arange(n) * (TWO_PI / n)
    return np.meshgrid(g, g, indexing="ij")


# --- criterion 1 -----------------------------------------------------------

def check_clifford_baseline() -> CheckResult:
    U, V = _grid(16, 0.13)
    jet = clifford(U, V)
    E, F, G = first_form(jet)
    e, f, g = second_form_s3(jet)
    dev = max(
        float(np.max(np.abs(E - 0.5))), float(np.max(np.abs(F))),
        float(np.max(np.abs(G - 0.5))),
        float(np.max(np.abs(e / E + 1.0))), float(np.max(np.abs(g / G - 1.0))),
    )
    fc = lmn_closed_form(U, V, 0.0, _BUMP)
    dev = max(dev, float(np.max(np.abs(fc.L))), float(np.max(np.abs(fc.M - 1.0))),
              float(np.max(np.abs(fc.N))))
    return CheckResult("clifford_baseline", dev,
                       "(E,F,G)=(1/2,0,1/2), curvatures -1/+1, (L,M,N)=(0,1,0)",
                       1e-12, dev < 1e-12)


# --- criterion 2 -----------------------------------------------------------

def check_symmetry_relations() -> CheckResult:
    worst = 0.0
    for eps in (0.1, 1.0 / 3.0):
        U, V = _grid(64)
        jet_uv = deformed(U, V, eps, _BUMP)
        jet_vu = deformed(V, U, eps, _BUMP)
        a = FormCoefficients(*first_form(jet_uv), *second_form_s3(jet_uv))
        b = FormCoefficients(*first_form(jet_vu), *second_form_s3(jet_vu))
        for x, y in zip((a.E, a.F, a.G, a.e, a.f, a.g), (b.E, b.F, b.G, b.e, b.f, b.g)):
            worst = max(worst, float(np.max(np.abs(x - y))))
        pa = lmn_closed_form(U, V, eps, _BUMP)
        pb = lmn_closed_form(V, U, eps, _BUMP)
        for x, y in zip((pa.L, pa.M, pa.N), (pb.L, pb.M, pb.N)):
            worst = max(worst, float(np.max(np.abs(x - y))))
    return CheckResult("symmetry_relations", worst,
                       "X(u,v) = X(v,u) for all nine coefficients", 1e-10,
                       worst < 1e-10)


# --- criterion 3 -----------------------------------------------------------

def check_direction_agreement() -> CheckResult:
    worst = 0.0
    for eps in (0.05, 0.1, 1.0 / 3.0):
        U, V = _grid(64)
        worst = max(worst, consistency_check(U, V, eps, _BUMP).root_angle_max)
    return CheckResult("closed_form_vs_pipeline_directions", worst,
                       "projective direction agreement", 1e-8, worst < 1e-8)


def check_polynomial_identity() -> CheckResult:
    worst = 0.0
    for eps in (0.05, 0.1, 1.0 / 3.0):
        U, V = _grid(64)
        worst = max(worst, consistency_check(U, V, eps, _BUMP).poly_identity_rel)
    return CheckResult("field_polynomial_identity", worst,
                       "(L,M,N) = -4(1+eps^2 h^2)^4 (Fg-Gf, Eg-Ge, Ef-Fe)",
                       1e-9, worst < 1e-9)


# --- criterion 4 -----------------------------------------------------------

def check_first_order_holonomy():
    step = 1e-3
    worst = 0.0
    worst_rich = 0.0
    for v0 in (0.0, 0.7, 2.1):
        d1, _ = fd_v_derivatives(TWO_PI, v0, step, tol=1e-12)
        d1h, _ = fd_v_derivatives(TWO_PI, v0, step / 2.0, tol=1e-12)
        worst = max(worst, abs(d1))
        worst_rich = max(worst_rich, abs((4.0 * d1h - d1) / 3.0))
    stated = CheckResult(
        "first_order_holonomy.stated", worst, "|central diff| < 1e-5 at step 1e-3",
        1e-5, worst < 1e-5,
        note="true first derivative is 0; the plain difference at v0=0 carries "
             "~1.9e-5 of eps^3 contamination")
    measured = CheckResult(
        "first_order_holonomy.measured", worst_rich,
        "Richardson-extrapolated central diff -> 0", 1e-9, worst_rich < 1e-9)
    return stated, measured


# --- criterion 5 -----------------------------------------------------------

def check_second_order_holonomy():
    v0 = 0.4
    steps = (3e-3, 1.5e-3)
    d2 = []
    for s in steps:
        _, second = fd_v_derivatives(TWO_PI, v0, s, tol=1e-12)
        d2.append(second)
    rich = (4.0 * d2[1] - d2[0]) / 3.0
    stated_dev = abs(d2[0] + 3.0 * math.pi)
    stated_rich_dev = abs(rich + 3.0 * math.pi)
    measured_dev = abs(d2[0] + 6.0 * math.pi)
    measured_rich_dev = abs(rich + 6.0 * math.pi)
    stated = CheckResult(
        "second_order_holonomy.stated", d2[0], "-3pi (1e-2 plain, 1e-4 Richardson)",
        1e-2, stated_dev < 1e-2 and stated_rich_dev < 1e-4,
        note="measured value is -6pi: the -3pi target applies the b=1 variational "
             "identity to a family with 2b = M = 1")
    measured = CheckResult(
        "second_order_holonomy.measured", rich, "-6pi (1e-2 plain, 1e-4 Richardson)",
        1e-4, measured_dev < 1e-2 and measured_rich_dev < 1e-4)
    return stated, measured


# --- criterion 6 -----------------------------------------------------------

def check_return_map_coefficient():
    eps_list = (0.01, 0.02, 0.04)
    c2_a, dev_half = displacement_fit(eps_list, _BUMP, v0=0.0)
    c2_b, _ = displacement_fit(eps_list, _BUMP, v0=1.0)
    target_half = -1.5 * math.pi
    target_full = -3.0 * math.pi
    stated_ok = abs(c2_a - target_half) < 0.02 * abs(target_half)
    measured_ok = (abs(c2_a - target_full) < 0.02 * abs(target_full)
                   and abs(c2_b - target_full) < 0.02 * abs(target_full))
    stated = CheckResult(
        "return_map_coefficient.stated", c2_a, "-3pi/2 within 2%",
        0.02 * abs(target_half), stated_ok,
        note="measured coefficient is -3pi (twice the stated target)")
    measured = CheckResult(
        "return_map_coefficient.measured", c2_a, "-3pi within 2%, v0-independent",
        0.02 * abs(target_full), measured_ok,
        note=f"v0=0 gives {c2_a!r}, v0=1 gives {c2_b!r}")
    return stated, measured


# --- criterion 7 -----------------------------------------------------------

def check_rotation_monotonicity(n: int = 2000):
    eps_values = [0.02 * k for k in range(1, 11)]
    rows = [rotation_number(e, _BUMP, Branch.FIRST, SectionSpec("u0"), n=n)
            for e in eps_values]
    ok = True
    min_gap_ratio = float("inf")
    for a, b in zip(rows, rows[1:]):
        gap = a.rho - b.rho          # rho decreases with eps
        bound = 3.0 * (a.err + b.err)
        if gap <= bound:
            ok = False
        if bound > 0:
            min_gap_ratio = min(min_gap_ratio, gap / bound)
    table = [(r.eps, r.rho, r.err) for r in rows]
    return CheckResult(
        "rotation_monotonicity", min_gap_ratio,
        "rho strictly monotone, adjacent gaps > 3x error estimates", 1.0, ok,
        note=f"rho table {table}")


# --- criterion 8 -----------------------------------------------------------

def _orbit_pair_deviation(eps_first: float, eps_second: float, a: float, b: float,
                          tol: float = 1e-12) -> float:
    """max |v_1(t) - u_2(t)| between the reflected first-branch orbit at
    eps_first from (a, b) and the second-branch orbit at eps_second from (b, a)."""
    o1 = integrate_orbit((a, b), Branch.FIRST, eps_first, _BUMP, u_span=TWO_PI, tol=tol)
    o2 = integrate_orbit((b, a), Branch.SECOND, eps_second, _BUMP, v_span=TWO_PI, tol=tol)
    ts = np.linspace(a, a + TWO_PI, 65)
    return float(np.max(np.abs(o1._dense(ts)[0] - o2._dense(ts)[0])))


def check_sigma_conjugacy():
    worst_same = 0.0
    worst_flip = 0.0
    ret_same = 0.0
    ret_flip = 0.0
    for eps in (0.05, 0.1):
        worst_same = max(worst_same, _orbit_pair_deviation(eps, eps, 0.3, 1.1))
        worst_flip = max(worst_flip, _orbit_pair_deviation(-eps, eps, 0.3, 1.1))
        s0 = 0.7
        p1_same = poincare_diag(s0, eps, _BUMP, Branch.FIRST)
        p1_flip = poincare_diag(s0, -eps, _BUMP, Branch.FIRST)
        p2 = poincare_diag(s0, eps, _BUMP, Branch.SECOND)
        ret_same = max(ret_same, abs(p2 - (p1_same - TWO_PI)))
        ret_flip = max(ret_flip, abs(p2 - (p1_flip - TWO_PI)))
    stated = CheckResult(
        "sigma_conjugacy.stated", max(worst_same, ret_same),
        "reflection maps first onto second branch at the same eps", 1e-7,
        max(worst_same, ret_same) < 1e-7,
        note="reflection composes with eps -> -eps for this family (the swap "
             "isometry reverses the normal)")
    measured = CheckResult(
        "sigma_conjugacy.measured", max(worst_flip, ret_flip),
        "reflected first branch at -eps = second branch at +eps", 1e-7,
        max(worst_flip, ret_flip) < 1e-7,
        note="diagonal return maps satisfy pi2_eps(s) = pi1_(-eps)(s) - 2pi")
    return stated, measured


# --- criterion 9 -----------------------------------------------------------

def check_conformal_invariance():
    worst_match = 0.0
    for eps in (0.0, 0.1, 1.0 / 3.0):
        worst_match = max(worst_match, principal_match(eps, _BUMP, samples=32))
    ang, length = tangent_distortion(1.0 / 3.0, _BUMP)
    ok = worst_match < 1e-6 and ang < 1e-9
    return CheckResult(
        "conformal_invariance", worst_match,
        "principal lines match through the projection; distortion < 1e-9",
        1e-6, ok, note=f"tangent angle distortion {ang!r}, length mismatch {length!r}")


# --- criterion 10 ----------------------------------------------------------

def check_umbilic_margin():
    worst = float("inf")
    for eps in (0.05, 0.1, 0.15, 0.2):
        _, mag, _ = umbilic_scan(eps, _BUMP, 128)
        worst = min(worst, mag)
    _, mag_third, arg = umbilic_scan(1.0 / 3.0, _BUMP, 128)
    return CheckResult(
        "umbilic_margin", worst, "min max(|L|,|M|,|N|) > 0.5 for eps <= 0.2",
        0.5, worst > 0.5,
        note=f"recorded eps=1/3: min coefficient magnitude {mag_third!r} at {arg}")


# --- criterion 11 ----------------------------------------------------------

def check_density_proxy(n_scan: int = 500, returns: int = 500):
    eps_values = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3]
    records, eps0 = epsilon_scan(eps_values, _BUMP, n=n_scan, qmax=20)
    orbit = integrate_orbit((0.0, 0.5), Branch.FIRST, eps0, _BUMP,
                            u_span=returns * TWO_PI, tol=1e-9)
    frac = coverage_fraction(orbit, 32)
    margin = max(r["margin"] for r in records)
    return CheckResult(
        "density_proxy", frac, ">= 0.95 of 32x32 cells in 500 returns", 0.95,
        frac >= 0.95,
        note=f"selected eps0={eps0!r} with rational-distance margin {margin!r} (Q=20)")


# --- criterion 12 ----------------------------------------------------------

def check_figure_artifacts(outdir=None):
    outdir = outdir or tempfile.mkdtemp(prefix="cliffordlines_")
    paths = []
    residual = float("nan")
    for eps in (0.0, 1.0 / 3.0):
        pts, faces = torus_mesh(eps, _BUMP, 64)
        orbits = []
        for branch, start in ((Branch.FIRST, (0.0, 0.5)), (Branch.SECOND, (0.5, 0.0))):
            kw = {"u_span": 4 * TWO_PI} if branch is Branch.FIRST else {"v_span": 4 * TWO_PI}
            o = integrate_orbit(start, branch, eps, _BUMP, tol=1e-9, **kw)
            orbits.append(project_orbit(o, eps, _BUMP))
        path = os.path.join(outdir, f"torus_eps{eps!r}.obj")
        write_obj(path, pts, faces, orbits)
        paths.append(path)
        if eps == 0.0:
            R, z0, rho = revolution_profile(eps, _BUMP)
            residual = revolution_residual(pts, R, z0, rho)
    ok = residual < 1e-6 and all(os.path.exists(p) for p in paths)
    return CheckResult(
        "figure_artifacts", residual,
        "valid OBJ meshes; eps=0 mesh on a torus of revolution", 1e-6, ok,
        note=f"profile fit from three projected parallels; files {paths}")


# --- provenance tags --------------------------------------------------------

def provenance_tags():
    U, V = _grid(32, 0.21)
    eps = 0.1
    jet = deformed(U, V, eps, _BUMP)
    fc = closed_form_coefficients(U, V, eps, _BUMP)
    lam, spread, model_dev = second_form_scale_ratio(jet, fc)
    factor, fspread = lmn_normalization(U, V, eps, _BUMP)
    res1 = variational_residual(1.0, 0.3, "first")
    res2 = variational_residual(1.0, 0.3, "second", eps_step=3e-3)
    scale, scale_res = closed_form_scale(TWO_PI, 0.4)
    d1, _ = fd_v_derivatives(math.pi / 3.0, 0.2, 1e-3)
    sign = float(np.sign(d1) * np.sign(v_eps_closed(math.pi / 3.0, 0.2)))
    clear = pole_clearance(1.0 / 3.0, _BUMP, grid_n=256)
    return {
        "second_form_scale_lambda": {"median": lam, "spread": spread,
                                     "dev_from_-sqrt(EG-F^2)": model_dev},
        "field_normalization_factor": {"median": factor, "rel_spread": fspread,
                                       "sign": "positive"},
        "variational_normalization": {"first_order": res1.tag, "second_order": res2.tag,
                                      "residuals": [res1.residual, res2.residual]},
        "v_epseps_closed_scale": {"measured_scale": scale, "residual": scale_res},
        "v_eps_sign": sign,
        "pole_clearance_eps_1_3": clear,
    }


def run_verification(outdir=None, rotation_n: int = 2000,
                     scan_n: int = 500) -> VerificationReport:
    rep = VerificationReport()
    rep.add(check_clifford_baseline())
    rep.add(check_symmetry_relations())
    rep.add(check_direction_agreement())
    rep.add(check_polynomial_identity())
    for r in check_first_order_holonomy():
        rep.add(r)
    for r in check_second_order_holonomy():
        rep.add(r)
    for r in check_return_map_coefficient():
        rep.add(r)
    rep.add(check_rotation_monotonicity(n=rotation_n))
    for r in check_sigma_conjugacy():
        rep.add(r)
    rep.add(check_conformal_invariance())
    rep.add(check_umbilic_margin())
    rep.add(check_density_proxy(n_scan=scan_n))
    rep.add(check_figure_artifacts(outdir))
    rep.tags = provenance_tags()
    return rep
