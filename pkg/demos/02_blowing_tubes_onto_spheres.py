"""
Blowing tube fibres onto sphere fibres
======================================

Evaluates the Milnor vector field of ``(xy, z^2)`` and integrates it from
points of a tube fibre ``G = eta * y`` until they reach the sphere of radius
``eps``.  Along the way the direction ``G / |G|`` must not move while both the
distance to the origin and ``|G|`` grow.

Run with ``python3 demos/02_blowing_tubes_onto_spheres.py [outdir]``; with an
output directory the trajectories are written as CSV files.
"""

# %%
import sys
from pathlib import Path

import numpy as np

from germfib import blow_away, catalog_germ, field_eval, sample_fiber

g = catalog_germ("xy_z2")
eps, eta = 0.5, 0.005
y = np.array([0.6, 0.8])
disc_rays = np.array([[0.0, 1.0], [1.0, 0.0], [-1.0, 0.0]])

# %%
# On the Milnor set (here x = y) the gradient of rho is a combination of the
# gradient of |G|^2 and the normal fields; the coefficient a must be positive.
fe = field_eval(g, np.array([0.3, 0.3, 0.2]))
print(f"a = {fe.a:.6f} (least squares {fe.a_lstsq:.6f}), decomposition defect {fe.residual_rho:.1e}")
off = field_eval(g, np.array([0.3, 0.1, 0.2]))
print(f"off the Milnor set: defect {off.residual_rho:.2f}, sin^2 angle(v1, v2) = {off.sin2:.3f}")

# %%
# Sample the tube fibre and push every point outwards.
tube = sample_fiber(g, "tube", y, eps, eta, 10, seed=0, disc_rays=disc_rays)
print(f"{len(tube)} tube points, max |G - eta y| = {np.abs(g.values(tube.points) - eta * y).max():.1e}")
trajectories = [blow_away(g, x, eps) for x in tube.points]
for i, tr in enumerate(trajectories):
    print(f"trajectory {i}: {tr.termination}, {tr.steps} steps, "
          f"|x_end| = {np.linalg.norm(tr.end):.12f}, Psi drift {tr.drift:.1e}, monotone {tr.monotone}")

# %%
if len(sys.argv) > 1:
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    for i, tr in enumerate(trajectories):
        tr.to_csv(out / f"trajectory_{i:02d}.csv")
    tube.to_csv(out / "tube.csv")
    print(f"wrote {len(trajectories)} trajectories to {out}")
