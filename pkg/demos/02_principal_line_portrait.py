#!/usr/bin/env python3
"""Tour 2: the two principal foliations in the chart.

Integrates several orbits of each branch on the deformed torus and, when
matplotlib is available, draws the canonical-square phase portrait with
the direction field underneath.  Long first-branch orbits fill the
square; the coverage fraction quantifies that.
"""

import numpy as np

from cliffordlines import (Branch, SinSquaredBump, coverage_fraction,
                           integrate_orbit, lmn_closed_form,
                           principal_directions, select_branch)

TWO_PI = 2 * np.pi
bump = SinSquaredBump()
eps = 0.25

print(f"integrating principal-line orbits at eps = {eps}")
first_orbits = [integrate_orbit((0.0, v0), Branch.FIRST, eps, bump,
                                u_span=3 * TWO_PI, tol=1e-9)
                for v0 in (0.5, 2.0, 4.2)]
second_orbits = [integrate_orbit((u0, 0.0), Branch.SECOND, eps, bump,
                                 v_span=3 * TWO_PI, tol=1e-9)
                 for u0 in (1.0, 3.5)]

long_orbit = integrate_orbit((0.0, 0.5), Branch.FIRST, eps, bump,
                             u_span=200 * TWO_PI, tol=1e-9)
for cells in (8, 16, 32):
    frac = coverage_fraction(long_orbit, cells)
    print(f"coverage of the {cells}x{cells} partition after 200 returns: {frac:.3f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the figure")
    raise SystemExit(0)

fig, ax = plt.subplots(figsize=(7, 7))
g = np.linspace(0, TWO_PI, 18)
Ug, Vg = np.meshgrid(g, g, indexing="ij")
fc = lmn_closed_form(Ug, Vg, eps, bump)
d1, d2 = principal_directions(fc)
for dirs, color in ((select_branch((d1, d2), Branch.FIRST), "tab:blue"),
                    (select_branch((d1, d2), Branch.SECOND), "tab:red")):
    ax.quiver(Ug, Vg, dirs[..., 0], dirs[..., 1], color=color, alpha=0.25,
              angles="xy", scale=30, headwidth=1)
for orbit in first_orbits:
    u, v = orbit.canonical()
    ax.plot(u, v, ".", ms=1.5, color="tab:blue")
for orbit in second_orbits:
    u, v = orbit.canonical()
    ax.plot(u, v, ".", ms=1.5, color="tab:red")
ax.set_xlim(0, TWO_PI)
ax.set_ylim(0, TWO_PI)
ax.set_xlabel("u")
ax.set_ylabel("v")
ax.set_title(f"principal foliations of the deformed torus, eps = {eps}")
fig.savefig("principal_portrait.png", dpi=150)
print("wrote principal_portrait.png")
