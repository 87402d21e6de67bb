#!/usr/bin/env python3
"""Tour 4: stereographic images in R^3 and mesh export.

Projects the undeformed and deformed tori to R^3, confirms the
undeformed image is a torus of revolution and that principal lines are
preserved by the (conformal) projection, then writes viewable OBJ
meshes with principal-line polylines.
"""

import numpy as np

from cliffordlines import (Branch, SinSquaredBump, integrate_orbit,
                           pole_clearance, principal_match, project_orbit,
                           revolution_profile, revolution_residual,
                           tangent_distortion, torus_mesh, write_obj)

TWO_PI = 2 * np.pi
bump = SinSquaredBump()

print("pole clearance (pole at (0,0,0,1)):")
for eps in (0.0, 1.0 / 3.0):
    print(f"  eps = {eps:.4f}: min |a_eps - pole| = {pole_clearance(eps, bump):.4f}")

R, z0, rho = revolution_profile(0.0, bump)
print(f"\nundeformed image: torus of revolution, R = {R:.6f}, rho = {rho:.6f}")
pts, faces = torus_mesh(0.0, bump, 48)
print("max distance of mesh vertices from that torus:",
      revolution_residual(pts, R, z0, rho))

ang, length = tangent_distortion(1.0 / 3.0, bump)
print(f"\nconformality at eps = 1/3: angle distortion {ang:.2e}, "
      f"length mismatch {length:.2e}")
print("principal-line match through the projection (eps = 1/3):",
      principal_match(1.0 / 3.0, bump, samples=32))

for eps in (0.0, 1.0 / 3.0):
    pts, faces = torus_mesh(eps, bump, 64)
    polys = []
    for branch, start, span in ((Branch.FIRST, (0.0, 0.5), {"u_span": 6 * TWO_PI}),
                                (Branch.SECOND, (0.5, 0.0), {"v_span": 6 * TWO_PI})):
        orbit = integrate_orbit(start, branch, eps, bump, tol=1e-9, **span)
        polys.append(project_orbit(orbit, eps, bump))
    name = f"torus_eps{eps!r}.obj"
    write_obj(name, pts, faces, polys)
    print("wrote", name)
