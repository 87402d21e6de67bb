"""Command-line front end.

Subcommands: forms, orbit, poincare, rotation, scan, figure, verify.
Configuration is a flat key = value file plus command-line overrides;
unknown keys are rejected.  All outputs are deterministic: floats are
written with shortest round-trip decimals and reruns are byte-identical.

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from .bumps import bump_by_name
from .errors import ConfigError, NumericalError
from .field import Branch, lmn_closed_form
from .flow import SectionSpec, integrate_orbit, poincare_diag, poincare_u0, \
    poincare_v0, rotation_number
from .forms import first_form, second_form_s3
from .geometry import EPS_MAX, TWO_PI, canonical_angles, check_epsilon, deformed
from .meshes import torus_mesh, write_obj
from .projection import project_orbit
from .report import run_verification

__all__ = ["RunConfig", "main"]


@dataclass(frozen=True)
class RunConfig:
    epsilon: float = 0.1
    h_name: str = "sin2_uv"
    branch: str = "first"
    start_u: float = 0.0
    start_v: float = 0.5
    tol: float = 1e-10
    grid: int = 64
    iterations: int = 2000
    pole: tuple = (0.0, 0.0, 0.0, 1.0)
    section: str = "u0"
    deterministic: bool = True

    def validate(self) -> "RunConfig":
        try:
            check_epsilon(self.epsilon, EPS_MAX)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.branch not in ("first", "second"):
            raise ConfigError(f"branch must be 'first' or 'second', got {self.branch!r}")
        if self.h_name not in ("sin2_uv", "zero"):
            raise ConfigError(f"h_name must be 'sin2_uv' or 'zero', got {self.h_name!r}")
        if not 1e-13 <= self.tol <= 1e-4:
            raise ConfigError(f"tol must lie in [1e-13, 1e-4], got {self.tol!r}")
        if self.grid < 1:
            raise ConfigError(f"grid must be >= 1, got {self.grid}")
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}")
        if self.section not in ("u0", "v0", "diagonal"):
            raise ConfigError(f"section must be u0, v0 or diagonal, got {self.section!r}")
        if len(self.pole) != 4 or not all(math.isfinite(x) for x in self.pole):
            raise ConfigError("pole must be four finite reals")
        if abs(np.linalg.norm(self.pole) - 1.0) > 1e-9:
            raise ConfigError("pole must be a unit 4-vector")
        return self

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            val = getattr(self, f.name)
            if isinstance(val, tuple):
                val = " ".join(repr(float(x)) for x in val)
            elif isinstance(val, bool):
                val = "true" if val else "false"
            elif isinstance(val, float):
                val = repr(val)
            lines.append(f"{f.name} = {val}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in known:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            kwargs[key] = _parse_value(key, val)
        return cls(**kwargs)


def _parse_value(key: str, val: str):
    try:
        if key in ("grid", "iterations"):
            return int(val)
        if key in ("epsilon", "start_u", "start_v", "tol"):
            return float(val)
        if key == "pole":
            parts = tuple(float(x) for x in val.split())
            return parts
        if key == "deterministic":
            if val.lower() in ("true", "1", "yes"):
                return True
            if val.lower() in ("false", "0", "no"):
                return False
            raise ValueError(val)
        return val
    except ValueError:
        raise ConfigError(f"bad value for {key!r}: {val!r}") from None


def _fmt(x) -> str:
    return repr(float(x))


def _load_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_text(fh.read())
    override = {}
    if args.epsilon is not None:
        override["epsilon"] = args.epsilon
    if args.branch is not None:
        override["branch"] = args.branch
    if args.bump is not None:
        override["h_name"] = args.bump
    if args.grid is not None:
        override["grid"] = args.grid
    if args.tol is not None:
        override["tol"] = args.tol
    if args.iterations is not None:
        override["iterations"] = args.iterations
    if args.pole is not None:
        override["pole"] = tuple(args.pole)
    if getattr(args, "start", None) is not None:
        override["start_u"], override["start_v"] = args.start
    if getattr(args, "section", None) is not None:
        override["section"] = args.section
    return replace(cfg, **override).validate()


def _branch(cfg: RunConfig) -> Branch:
    return Branch.FIRST if cfg.branch == "first" else Branch.SECOND


def cmd_forms(cfg: RunConfig, out: str) -> None:
    g = np.arange(cfg.grid) * (TWO_PI / cfg.grid)
    U, V = np.meshgrid(g, g, indexing="ij")
    bump = bump_by_name(cfg.h_name)
    jet = deformed(U, V, cfg.epsilon, bump)
    E, F, G = first_form(jet)
    e, f, gg = second_form_s3(jet)
    fc = lmn_closed_form(U, V, cfg.epsilon, bump)
    delta = fc.delta
    rows = ["u,v,E,F,G,e,f,g,L,M,N,delta"]
    arrs = [U, V, E, F, G, e, f, gg,
            np.broadcast_to(fc.L, U.shape), np.broadcast_to(fc.M, U.shape),
            np.broadcast_to(fc.N, U.shape), np.broadcast_to(delta, U.shape)]
    for i in range(cfg.grid):
        for j in range(cfg.grid):
            rows.append(",".join(_fmt(a[i, j]) for a in arrs))
    with open(out, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def cmd_orbit(cfg: RunConfig, out: str) -> None:
    bump = bump_by_name(cfg.h_name)
    branch = _branch(cfg)
    span = cfg.iterations * TWO_PI
    kw = {"u_span": span} if branch is Branch.FIRST else {"v_span": span}
    orbit = integrate_orbit((cfg.start_u, cfg.start_v), branch, cfg.epsilon,
                            bump, tol=cfg.tol, **kw)
    um, vm = canonical_angles(orbit.us, orbit.vs)
    x = deformed(orbit.us, orbit.vs, cfg.epsilon, bump).p
    rows = ["i,u_lift,v_lift,u_mod,v_mod,x1,x2,x3,x4"]
    for i in range(len(orbit.us)):
        rows.append(",".join([str(i), _fmt(orbit.us[i]), _fmt(orbit.vs[i]),
                              _fmt(um[i]), _fmt(vm[i])]
                             + [_fmt(c) for c in x[i]]))
    with open(out, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def cmd_poincare(cfg: RunConfig, out: str) -> None:
    bump = bump_by_name(cfg.h_name)
    branch = _branch(cfg)
    data = {"eps": cfg.epsilon, "branch": cfg.branch, "section": cfg.section}
    if cfg.section == "u0":
        if branch is not Branch.FIRST:
            raise ConfigError("section u0 takes the first branch")
        data["v0"] = cfg.start_v
        data["v1"] = poincare_u0(cfg.start_v, cfg.epsilon, bump, cfg.tol)
    elif cfg.section == "v0":
        if branch is not Branch.SECOND:
            raise ConfigError("section v0 takes the second branch")
        data["u0"] = cfg.start_u
        data["u1"] = poincare_v0(cfg.start_u, cfg.epsilon, bump, cfg.tol)
    else:
        data["s0"] = cfg.start_u
        data["s1"] = poincare_diag(cfg.start_u, cfg.epsilon, bump, branch, cfg.tol)
    _write_json(out, data)


def cmd_rotation(cfg: RunConfig, out: str) -> None:
    bump = bump_by_name(cfg.h_name)
    branch = _branch(cfg)
    section = cfg.section
    if section == "u0" and branch is Branch.SECOND:
        section = "v0"
    est = rotation_number(cfg.epsilon, bump, branch, SectionSpec(section),
                          n=cfg.iterations, tol=cfg.tol, start=cfg.start_v)
    _write_json(out, {"eps": est.eps, "branch": cfg.branch, "rho": est.rho,
                      "err": est.err, "n": est.n})


def cmd_scan(cfg: RunConfig, out: str, eps_values) -> None:
    bump = bump_by_name(cfg.h_name)
    records = []
    from .flow import epsilon_scan
    table, selected = epsilon_scan(eps_values, bump, n=cfg.iterations,
                                   qmax=20, tol=cfg.tol)
    for row in table:
        records.append({"eps": row["eps"], "branch": "first",
                        "rho": row["rho_first"], "err": row["err_first"],
                        "n": cfg.iterations})
        records.append({"eps": row["eps"], "branch": "second",
                        "rho": row["rho_second"], "err": row["err_second"],
                        "n": cfg.iterations})
    _write_json(out, {"records": records, "selected_eps": selected})


def cmd_figure(cfg: RunConfig, outdir: str) -> None:
    bump = bump_by_name(cfg.h_name)
    os.makedirs(outdir, exist_ok=True)
    pts, faces = torus_mesh(cfg.epsilon, bump, cfg.grid, cfg.pole)
    polylines = []
    for branch, start in ((Branch.FIRST, (cfg.start_u, cfg.start_v)),
                          (Branch.SECOND, (cfg.start_v, cfg.start_u))):
        kw = {"u_span": 4 * TWO_PI} if branch is Branch.FIRST else {"v_span": 4 * TWO_PI}
        orbit = integrate_orbit(start, branch, cfg.epsilon, bump,
                                tol=max(cfg.tol, 1e-9), **kw)
        polylines.append(project_orbit(orbit, cfg.epsilon, bump, cfg.pole))
    path = os.path.join(outdir, f"torus_eps{cfg.epsilon!r}.obj")
    write_obj(path, pts, faces, polylines)
    print(path)


def cmd_verify(cfg: RunConfig, out: str) -> int:
    rep = run_verification(rotation_n=cfg.iterations, scan_n=min(cfg.iterations, 500))
    _write_json(out, rep.to_dict())
    use_color = sys.stdout.isatty() and not os.environ.get("NO_COLOR")
    for line in rep.lines():
        if use_color:
            if line.startswith("[PASS]"):
                line = "\x1b[32m" + line + "\x1b[0m"
            elif line.startswith("[FAIL]"):
                line = "\x1b[31m" + line + "\x1b[0m"
        print(line)
    return 2 if rep.hard_failures else 0


def _write_json(path: str, data) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cliffordlines",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("forms", "write a grid table of fundamental-form and field coefficients"),
        ("orbit", "integrate one principal-line orbit to CSV"),
        ("poincare", "one return-map evaluation to JSON"),
        ("rotation", "rotation-number estimate to JSON"),
        ("scan", "rotation numbers across an epsilon list, with selection"),
        ("figure", "export projected torus meshes and orbit polylines as OBJ"),
        ("verify", "run the full verification suite"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", help="flat key = value configuration file")
        sp.add_argument("--epsilon", type=float)
        sp.add_argument("--branch", choices=("first", "second"))
        sp.add_argument("--bump", choices=("sin2_uv", "zero"))
        sp.add_argument("--grid", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--iterations", type=int)
        sp.add_argument("--pole", type=float, nargs=4, metavar=("X1", "X2", "X3", "X4"))
        sp.add_argument("--start", type=float, nargs=2, metavar=("U", "V"))
        sp.add_argument("--section", choices=("u0", "v0", "diagonal"))
        sp.add_argument("--out", help="output path (directory for figure)")
        if name == "scan":
            sp.add_argument("--eps-list", type=float, nargs="+",
                            default=[0.05, 0.1, 0.15, 0.2, 0.25, 0.3])
    return p


_DEFAULT_OUT = {
    "forms": "forms.csv", "orbit": "orbit.csv", "poincare": "poincare.json",
    "rotation": "rotation.json", "scan": "scan.json", "figure": ".",
    "verify": "verify.json",
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        out = args.out or _DEFAULT_OUT[args.command]
        if args.command == "forms":
            cmd_forms(cfg, out)
        elif args.command == "orbit":
            cmd_orbit(cfg, out)
        elif args.command == "poincare":
            cmd_poincare(cfg, out)
        elif args.command == "rotation":
            cmd_rotation(cfg, out)
        elif args.command == "scan":
            cmd_scan(cfg, out, args.eps_list)
        elif args.command == "figure":
            cmd_figure(cfg, out)
        elif args.command == "verify":
            return cmd_verify(cfg, out)
        return 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure (eps={getattr(args, 'epsilon', None)}): {exc}",
              file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
