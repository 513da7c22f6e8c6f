"""
The Milnor set and discriminant of (xy, z^2)
============================================

Walks through the geometric objects the library builds for the map
``G(x, y, z) = (xy, z^2)``: the singular set, the Milnor set, the
discriminant directions and the components of the Milnor set once the
preimage of the discriminant is removed.

Run with ``python3 demos/01_milnor_set_of_xy_z2.py``.
"""

# %%
# Exact objects first.  Every polynomial below is built from rational
# coefficients, so these are identities rather than numerical guesses.
import numpy as np

from germfib import (Config, catalog_germ, milnor_set_system, sample_discriminant,
                     singular_set_system)
from germfib.conditions import check_radial_discriminant, milnor_witnesses

g = catalog_germ("xy_z2")
names = g.names
print(g)
print("Sing G equations:", [e.to_str(names) for e in singular_set_system(g).equations])
print("M(G) equation:   ", [e.to_str(names) for e in milnor_set_system(g).equations])

# %%
# The discriminant is sampled by projecting seeds onto Sing G at each rung of
# a radius ladder, mapping them through G and binning the image directions.
cfg = Config()
ds = sample_discriminant(g, cfg=cfg)
for ray in ds.rays:
    print(f"ray {np.round(ray.direction, 6)} seen at radii {ray.radii}")
print("radial discriminant:", check_radial_discriminant(ds, cfg).verdict)

# %%
# Milnor witnesses in G^-1(Disc G) are tagged and left out of the clustering;
# a segment that crosses the preimage cannot link two witnesses.
for ws in milnor_witnesses(g, ds, cfg=cfg):
    kept = ws.retained()
    sizes = np.bincount(kept.component)
    print(f"{ws.diagnostics['region']:>12}: {len(kept)} witnesses, "
          f"{ws.n_components} components, sizes {sizes.tolist()}")

# %%
# The planes x = y and x = -y lose the vertical axis and the line z = 0, so
# each piece is fixed by its plane, the sign of x and the sign of z.
kept = milnor_witnesses(g, ds, cfg=cfg)[0].retained()
for c in range(kept.n_components):
    p = kept.points[kept.component == c][0]
    sheet = "x = y " if abs(p[0] - p[1]) < 1e-6 else "x = -y"
    print(f"component {c}: {sheet}, sign x = {np.sign(p[0]):+.0f}, sign z = {np.sign(p[2]):+.0f}")
