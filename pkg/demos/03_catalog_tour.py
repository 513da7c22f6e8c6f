"""
A tour of the built-in germs
============================

Runs the full analysis on every catalog germ with a light configuration and
prints one row of verdicts per germ.  Conditions that are established by an
implication list the edge that carried them.

Run with ``python3 demos/03_catalog_tour.py``.
"""

# %%
import time

from germfib import Config, analyze, catalog_germ, catalog_names

cfg = Config(n_witness=150, rungs=3, n_blow=10)
columns = ["nice", "radial_disc", "cond_main", "rho_regular_psi", "mvf_exists", "tube_exists",
           "sphere_exists", "equivalence_evidence"]
short = {"pass": "P", "fail": "F", "inconclusive": "?"}

print(f"{'germ':<16}" + "".join(f"{c[:10]:>12}" for c in columns) + "    time")
for name in catalog_names():
    t0 = time.perf_counter()
    bundle = analyze(catalog_germ(name), cfg)
    verdicts = bundle.verdicts()
    cells = ["".join(short[v] for v in verdicts.get(c, [])) or "-" for c in columns]
    row = "".join(f"{cell:>12}" for cell in cells)
    print(f"{name:<16}{row}  {time.perf_counter() - t0:5.1f} s")

# %%
# Where did the sphere fibration of (xy, z^2) come from?
bundle = analyze(catalog_germ("xy_z2"), cfg)
for edge in bundle.report("sphere_exists").implied_by:
    print(f"sphere_exists <- {edge.theorem}: {', '.join(edge.hypotheses)}")
