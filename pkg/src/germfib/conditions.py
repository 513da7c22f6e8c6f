"""Numerical certification of the hypotheses behind the tube and sphere fibrations.

Each ``check_*`` function returns a :class:`ConditionReport`.  Verdicts follow
one rule: ``fail`` needs a robust counterexample (residual an order of
magnitude below tolerance, violation an order above); anything marginal is
``inconclusive``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from .config import Config
from .flow import angle_between, field_eval
from .germ import MapGerm, singular_set_system
from .homogeneity import detect_polar_weights, detect_radial_weights
from .report import ConditionReport, Implication
from .systems import DeterminantalSystem, numerical_rank
from .varieties import (NewtonOptions, WitnessSet, cluster_components, milnor_set_system,
                        newton_project, project_batch, psi_milnor_set_system, refine_rank_deficient,
                        witness_sample)

ROBUST_RESIDUAL = 1e-11
BARRIER_SAMPLES = 33


@dataclass
class Ray:
    direction: np.ndarray
    radii: list[float]

    def to_json(self) -> dict:
        return {"direction": self.direction, "radii": self.radii}


@dataclass
class DiscriminantSample:
    """Directions of ``G(Sing G)`` seen at each rung of a radius ladder."""

    rays: list[Ray]
    origin_only: bool
    boundary_status: str = "not_computed"
    rung_directions: list[tuple[float, np.ndarray]] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.boundary_status not in ("not_computed", "empty_by_criterion", "user_declared"):
            raise ValueError(f"bad boundary_status {self.boundary_status!r}")

    @property
    def directions(self) -> np.ndarray:
        if not self.rays:
            return np.zeros((0, 0))
        return np.array([r.direction for r in self.rays])

    def to_json(self) -> dict:
        return {"rays": [r.to_json() for r in self.rays], "origin_only": self.origin_only,
                "boundary_status": self.boundary_status, "diagnostics": self.diagnostics}


def _cfg(cfg: Config | None) -> Config:
    return cfg if cfg is not None else Config()


def _bin_directions(D: np.ndarray, tol: float) -> np.ndarray:
    """Greedy angular binning; each bin is represented by its normalised mean."""
    reps, members = [], []
    for d in D:
        if reps:
            ang = angle_between(np.array(reps), d[None, :])
            k = int(np.argmin(ang))
            if ang[k] < tol:
                members[k].append(d)
                continue
        reps.append(d)
        members.append([d])
    out = []
    for mem in members:
        v = np.mean(mem, axis=0)
        out.append(v / np.linalg.norm(v))
    out = np.array(out).reshape(-1, D.shape[1])
    return out[np.lexsort(out.T[::-1])] if len(out) else out


def vg_system(g: MapGerm) -> DeterminantalSystem:
    return DeterminantalSystem(list(g.components), name="V_G")


def image_neighbourhood_witness(g: MapGerm, cfg: Config | None = None, n: int = 200):
    """A point of ``G = 0`` (off the origin) where the Jacobian has full rank p, or None.

    Its existence means ``Sing G`` does not contain all of ``G^-1(0)``, which
    forces ``Im G`` to contain a neighbourhood of the origin.
    """
    cfg = _cfg(cfg)
    if g.m < g.p:
        return None
    system = vg_system(g)
    for k, r in enumerate(cfg.ladder[:2]):
        ws = witness_sample(system, r, n, cfg.seed, task=200 + k, opts=NewtonOptions(tol=cfg.tol_variety))
        for x in ws.points:
            J = g.jacobian_values(x)
            if numerical_rank(J, cfg.rank_gap) < g.p:
                continue
            s = np.linalg.svd(J, compute_uv=False)
            # a genuine regular zero lies within |G|/sigma_min of x; demand that be tiny
            # so that non-reduced components (z^2 = 0 solved only to sqrt(tol)) are rejected
            if s[-1] > 1e-3 * s[0] and np.linalg.norm(g.values(x)) / s[-1] < 1e-8 * np.linalg.norm(x):
                return x
    return None


def sample_discriminant(g: MapGerm, ladder=None, cfg: Config | None = None, n: int | None = None,
                        seed: int | None = None) -> DiscriminantSample:
    """Map Sing G witnesses through G and bin the image directions rung by rung."""
    cfg = _cfg(cfg)
    ladder = tuple(ladder or cfg.ladder)
    n = n or cfg.n_witness
    seed = cfg.seed if seed is None else seed
    sing = singular_set_system(g)
    rung_dirs, per_rung = [], []
    for k, r in enumerate(ladder):
        ws = witness_sample(sing, r, n, seed, task=100 + k, opts=NewtonOptions(tol=cfg.tol_variety))
        P = ws.points
        if len(P):
            # minors can vanish to high order; polish on the kernel system instead
            Pr, good = refine_rank_deficient(g.jacobian_values, g.hessian_values, P, r,
                                             NewtonOptions(tol=1e-12))
            P = np.where(good[:, None], Pr, P)
        G = g.values(P) if len(P) else np.zeros((0, g.p))
        norms = np.linalg.norm(G, axis=1)
        keep = norms >= cfg.tol_zero
        D = _bin_directions(G[keep] / norms[keep, None], cfg.disc_bin_tol) if keep.any() \
            else np.zeros((0, g.p))
        rung_dirs.append((float(r), D))
        per_rung.append({"radius": float(r), "sing_witnesses": len(ws), "nonzero_images": int(keep.sum()),
                         "directions": len(D)})
    allD = np.vstack([D for _, D in rung_dirs]) if rung_dirs else np.zeros((0, g.p))
    rays = []
    if len(allD):
        for d in _bin_directions(allD, cfg.disc_bin_tol):
            seen = [r for r, D in rung_dirs if len(D) and angle_between(D, d[None, :]).min() < cfg.disc_bin_tol]
            rays.append(Ray(d, seen))
    status = "not_computed"
    if any(f in g.declared_flags for f in ("boundary_empty", "image_boundary_in_disc")):
        status = "user_declared"
    if g.provenance is not None and detect_polar_weights(g, cfg.weight_bound) is not None:
        status = "empty_by_criterion"
    elif image_neighbourhood_witness(g, cfg) is not None:
        status = "empty_by_criterion"
    return DiscriminantSample(rays, not rays, status, rung_dirs, {"rungs": per_rung, "seed": seed})


def disc_preimage_mask(g: MapGerm, ds: DiscriminantSample, X, cfg: Config | None = None) -> np.ndarray:
    """True where ``x`` is numerically in ``G^-1(Disc G)``: G vanishes or Psi is near a ray."""
    cfg = _cfg(cfg)
    X = np.atleast_2d(X)
    G = g.values(X)
    norms = np.linalg.norm(G, axis=1)
    mask = norms < cfg.tol_zero
    if ds.rays:
        psi = G / np.where(norms > 0, norms, 1.0)[:, None]
        R = ds.directions
        ang = np.min(angle_between(psi[:, None, :], R[None, :, :]), axis=1)
        mask |= ang < cfg.angular_tol
    return mask


def ray_distance(g: MapGerm, ds: DiscriminantSample, X) -> np.ndarray:
    """Angle between Psi(x) and the nearest discriminant ray (inf when Disc = {0})."""
    psi = g.psi(np.atleast_2d(X))
    if not ds.rays:
        return np.full(len(psi), np.inf)
    return np.min(angle_between(psi[:, None, :], ds.directions[None, :, :]), axis=1)


def make_barrier(g: MapGerm, ds: DiscriminantSample, cfg: Config | None = None):
    """Segment test for clustering: blocked if some sample on it lies in ``G^-1(Disc G)``."""
    cfg = _cfg(cfg)
    ts = np.linspace(0.0, 1.0, BARRIER_SAMPLES)

    def barrier(A, B):
        S = A[:, None, :] + ts[None, :, None] * (B - A)[:, None, :]
        mask = disc_preimage_mask(g, ds, S.reshape(-1, A.shape[1]), cfg)
        return mask.reshape(len(A), len(ts)).any(axis=1)

    return barrier


def milnor_witnesses(g: MapGerm, ds: DiscriminantSample, ladder=None, cfg: Config | None = None,
                     n: int | None = None) -> list[WitnessSet]:
    """Clustered M(G) witnesses per rung; points in ``G^-1(Disc G)`` are tagged excluded."""
    cfg = _cfg(cfg)
    ladder = tuple(ladder or cfg.ladder)
    system = milnor_set_system(g)
    barrier = make_barrier(g, ds, cfg)
    out = []
    for k, r in enumerate(ladder):
        ws = witness_sample(system, r, n or cfg.n_witness, cfg.seed, task=k,
                            exclude=lambda X: disc_preimage_mask(g, ds, X, cfg),
                            opts=NewtonOptions(tol=cfg.tol_variety))
        ws = cluster_components(ws, cfg.link_scale, barrier=barrier)
        ws.name = f"milnor_r{k}"
        out.append(ws)
    return out


# --------------------------------------------------------------------------
# niceness and discriminant

def check_niceness(g: MapGerm, cfg: Config | None = None) -> ConditionReport:
    """Try the sufficient criteria in turn; never returns ``fail``."""
    cfg = _cfg(cfg)
    tols = {"rank_gap": cfg.rank_gap, "tol_variety": cfg.tol_variety}
    tried = []
    x = image_neighbourhood_witness(g, cfg)
    tried.append("image-neighbourhood")
    if x is not None:
        return ConditionReport("nice", "pass", {"criterion": "image-neighbourhood", "witness": x,
                                                "tried": tried, "facts": ["fact:vg-point-off-sing"]},
                               [Implication("image-neighbourhood-nice", ("fact:vg-point-off-sing",))],
                               tols, cfg.seed)
    tried.append("fgbar-coprime")
    prov = g.provenance
    if prov is not None and prov.kind == "fgbar" and "coprime" in g.declared_flags:
        return ConditionReport("nice", "pass", {"criterion": "fgbar-coprime", "tried": tried,
                                                "justification": g.declared_flags["coprime"],
                                                "facts": ["flag:coprime"]},
                               [Implication("fgbar-coprime-nice", ("flag:coprime",))], tols, cfg.seed)
    tried.append("radial-weights")
    w = detect_radial_weights(g, cfg.weight_bound)
    if w is not None:
        return ConditionReport("nice", "pass", {"criterion": "radial-weights", "weights": w, "tried": tried,
                                                "facts": ["weights:radial"]},
                               [Implication("radial-homogeneous", ("weights:radial",))], tols, cfg.seed)
    tried.append("polar-weights")
    if prov is not None:
        pw = detect_polar_weights(g, cfg.weight_bound)
        if pw is not None:
            return ConditionReport("nice", "pass", {"criterion": "polar-weights", "weights": pw,
                                                    "tried": tried, "facts": ["weights:polar"]},
                                   [Implication("polar-homogeneous", ("weights:polar",))], tols, cfg.seed)
    return ConditionReport("nice", "inconclusive",
                           {"tried": tried, "note": "no sufficient criterion verified; niceness is not "
                                                    "decided here"}, [], tols, cfg.seed)


def check_radial_discriminant(ds: DiscriminantSample, cfg: Config | None = None) -> ConditionReport:
    """Radiality as stability of the direction set across rungs (Hausdorff angular distance)."""
    cfg = _cfg(cfg)
    tol = cfg.angular_tol
    tols = {"angular_tol": tol, "fail_above": 10 * tol}
    ev = {"n_rays": len(ds.rays), "origin_only": ds.origin_only, "boundary_status": ds.boundary_status}
    if ds.boundary_status == "not_computed":
        ev["caveat"] = "boundary of the image closure not computed; only G(Sing G) was sampled"
    if ds.origin_only:
        ev["note"] = "discriminant is the origin"
        return ConditionReport("radial_disc", "pass", ev, [], tols, ds.diagnostics.get("seed"))
    rungs = [(r, D) for r, D in ds.rung_directions]
    if len(rungs) < 2:
        ev["note"] = "need at least two rungs"
        return ConditionReport("radial_disc", "inconclusive", ev, [], tols, ds.diagnostics.get("seed"))
    empty = [r for r, D in rungs if len(D) == 0]
    if empty:
        ev["note"] = f"no discriminant directions at radii {empty}"
        return ConditionReport("radial_disc", "inconclusive", ev, [], tols, ds.diagnostics.get("seed"))
    worst = 0.0
    pairs = []
    for (r1, D1), (r2, D2) in zip(rungs, rungs[1:]):
        A = angle_between(D1[:, None, :], D2[None, :, :])
        h = float(max(A.min(axis=1).max(), A.min(axis=0).max()))
        pairs.append({"radii": [r1, r2], "hausdorff": h})
        worst = max(worst, h)
    ev["rung_pairs"] = pairs
    ev["max_hausdorff"] = worst
    if worst < tol:
        verdict = "pass"
    elif worst > 10 * tol:
        verdict = "fail"
    else:
        verdict = "inconclusive"
    return ConditionReport("radial_disc", verdict, ev, [], tols, ds.diagnostics.get("seed"))


# --------------------------------------------------------------------------
# condition on the Milnor set

def _vg_distance(g: MapGerm, X: np.ndarray, r: float, cfg: Config) -> np.ndarray:
    """Distance estimate to ``G = 0``: the smaller of a Newton foot point and the nearest V_G sample."""
    system = vg_system(g)
    opts = NewtonOptions(tol=cfg.tol_variety)
    P, _, ok = project_batch(system, X, opts)
    d = np.where(ok, np.linalg.norm(P - X, axis=1), np.inf)
    cloud = [np.zeros((1, g.m))]
    for j, s in enumerate((0.6, 0.8, 1.0, 1.2, 1.4)):
        ws = witness_sample(system, s * r, cfg.n_witness, cfg.seed, task=300 + j, opts=opts)
        cloud.append(ws.points)
    tree = cKDTree(np.vstack(cloud))
    d2, _ = tree.query(X)
    return np.minimum(d, d2)


def check_condition_main(g: MapGerm, ladder=None, ds: DiscriminantSample | None = None,
                         cfg: Config | None = None, witnesses: list[WitnessSet] | None = None
                         ) -> ConditionReport:
    """Closure of ``M(G) - G^-1(Disc G)`` meets ``G = 0`` only at the origin.

    Evidence is the ratio ``delta(r)/r`` between the distance of the Milnor
    witnesses to ``G = 0`` and the rung radius: a cone-like positive lower
    bound across the ladder means the closure only touches ``G = 0`` at 0.
    """
    cfg = _cfg(cfg)
    ladder = tuple(ladder or cfg.ladder)
    ds = ds or sample_discriminant(g, ladder, cfg)
    witnesses = witnesses or milnor_witnesses(g, ds, ladder, cfg)
    ratio_fail = cfg.cond_main_ratio / 10
    tols = {"cond_main_ratio": cfg.cond_main_ratio, "fail_below": ratio_fail,
            "angular_tol": cfg.angular_tol, "tol_zero": cfg.tol_zero, "min_witnesses": cfg.min_witnesses}
    rungs, verdicts = [], []
    for r, ws in zip(ladder, witnesses):
        conv = ws.diagnostics.get("converged", len(ws))
        kept = ws.retained()
        info = {"radius": r, "converged": conv, "retained": len(kept)}
        if conv == 0:
            info["verdict"] = "inconclusive"
            info["note"] = "no Milnor witnesses converged"
        elif len(kept) == 0:
            info["verdict"] = "pass"
            info["note"] = "Milnor set lies in the preimage of the discriminant at this radius"
        elif len(kept) < cfg.min_witnesses:
            info["verdict"] = "inconclusive"
            info["note"] = "too few witnesses"
        else:
            d = _vg_distance(g, kept.points, r, cfg)
            k = int(np.argmin(d))
            ratio = float(d[k] / r)
            info.update({"delta": float(d[k]), "ratio": ratio, "closest_witness": kept.points[k]})
            if ratio >= cfg.cond_main_ratio:
                info["verdict"] = "pass"
            elif ratio < ratio_fail and kept.residuals[k] < ROBUST_RESIDUAL:
                info["verdict"] = "fail"
            else:
                info["verdict"] = "inconclusive"
        rungs.append(info)
        verdicts.append(info["verdict"])
    if "fail" in verdicts:
        verdict = "fail"
    elif all(v == "pass" for v in verdicts):
        verdict = "pass"
    else:
        verdict = "inconclusive"
    ratios = [ri["ratio"] for ri in rungs if "ratio" in ri]
    ev = {"rungs": rungs, "min_ratio": min(ratios) if ratios else None,
          "evidence_kind": "sampled at shrinking radii; no finite certificate for the closure"}
    return ConditionReport("cond_main", verdict, ev, [], tols, cfg.seed)


# --------------------------------------------------------------------------
# rho-regularity of Psi

def check_rho_regularity_psi(g: MapGerm, ladder=None, ds: DiscriminantSample | None = None,
                             cfg: Config | None = None, witnesses: list[WitnessSet] | None = None
                             ) -> ConditionReport:
    """Every M(Psi_G) witness off ``G = 0`` must map under Psi onto a discriminant ray.

    ``witnesses`` replaces the sampling step (one set per rung), which is how
    a known counterexample can be fed in.
    """
    cfg = _cfg(cfg)
    ladder = tuple(ladder or cfg.ladder)
    tol = cfg.angular_tol
    tols = {"angular_tol": tol, "fail_above": 10 * tol, "robust_residual": ROBUST_RESIDUAL,
            "tol_zero": cfg.tol_zero, "rank_gap": cfg.rank_gap}
    if g.p == 1:
        return ConditionReport("rho_regular_psi", "pass",
                               {"note": "p = 1: fibres of Psi are open, so spheres are transverse to them"},
                               [], tols, cfg.seed)
    ds = ds or sample_discriminant(g, ladder, cfg)
    system = psi_milnor_set_system(g)

    def off_vg(X):
        return np.linalg.norm(g.values(X), axis=1) > cfg.tol_zero

    if witnesses is None:
        witnesses = [witness_sample(system, r, cfg.n_witness, cfg.seed, task=400 + k, keep=off_vg,
                                    opts=NewtonOptions(tol=cfg.tol_variety))
                     for k, r in enumerate(ladder)]
    rungs, verdicts = [], []
    for ws in witnesses:
        X = ws.points
        info = {"retained": len(ws)}
        if len(ws):
            X = X[off_vg(X)]
        if len(X) == 0:
            info["verdict"] = "pass"
            info["note"] = "no witnesses off G = 0"
        else:
            ang = ray_distance(g, ds, X)
            res = np.max(np.abs(system.residuals(X)), axis=1)
            gn = np.linalg.norm(g.values(X), axis=1)
            finite = np.where(np.isfinite(ang), ang, np.pi)
            k = int(np.argmax(finite))
            info.update({"max_ray_angle": float(finite[k]), "worst_witness": X[k],
                         "max_residual": float(res.max())})
            robust = (res < ROBUST_RESIDUAL) & (finite > 10 * tol) & (gn > 1e3 * cfg.tol_zero)
            robust &= np.array([system.rank_deficient(x, cfg.rank_gap) for x in X])
            if robust.any():
                info["verdict"] = "fail"
                info["counterexample"] = X[np.flatnonzero(robust)[0]]
            elif finite.max() <= tol:
                info["verdict"] = "pass"
            else:
                info["verdict"] = "inconclusive"
        rungs.append(info)
        verdicts.append(info["verdict"])
    if "fail" in verdicts:
        verdict = "fail"
    elif all(v == "pass" for v in verdicts):
        verdict = "pass"
    else:
        verdict = "inconclusive"
    return ConditionReport("rho_regular_psi", verdict, {"rungs": rungs, "origin_only": ds.origin_only},
                           [], tols, cfg.seed)


# --------------------------------------------------------------------------
# Milnor set image

def stationarity(g: MapGerm, x: np.ndarray) -> float:
    """Relative distance of ``grad rho = 2x`` from the row space of ``dG(x)``.

    Zero exactly on M(G); unlike the minors it does not shrink with ``|x|``.
    """
    J = g.jacobian_values(x)
    w = 2 * np.asarray(x, dtype=float)
    d = w - J.T @ (np.linalg.pinv(J.T, rcond=1e-13) @ w)
    return float(np.linalg.norm(d) / max(np.linalg.norm(w), 1e-300))


def _fibre_minimiser(g: MapGerm, x: np.ndarray, y: np.ndarray, max_iter: int = 200):
    """Minimise rho on ``{G = y}`` from ``x``.

    A few projected gradient steps move ``x`` into the basin of the
    minimiser; Newton on the Lagrange system ``2x = dG^T lam, G = y`` then
    converges quadratically.
    """
    def correct(x):
        for _ in range(30):
            r = g.values(x) - y
            if np.max(np.abs(r)) < 1e-15:
                break
            x = x - np.linalg.pinv(g.jacobian_values(x), rcond=1e-13) @ r
        return x

    x = correct(x)
    it = 0
    for it in range(max_iter):
        J = g.jacobian_values(x)
        d = 2 * x - np.linalg.pinv(J, rcond=1e-13) @ (J @ (2 * x))
        if np.linalg.norm(d) <= 1e-3 * max(np.linalg.norm(2 * x), 1e-300):
            break
        x = correct(x - 0.25 * d)
    m, p = g.m, g.p
    lam = np.linalg.pinv(g.jacobian_values(x).T, rcond=1e-13) @ (2 * x)
    best = (stationarity(g, x), x)
    for _ in range(30):
        J = g.jacobian_values(x)
        H = g.hessian_values(x)[0]
        F = np.concatenate([2 * x - J.T @ lam, g.values(x) - y])
        K = np.zeros((m + p, m + p))
        K[:m, :m] = 2 * np.eye(m) - np.einsum("i,ijk->jk", lam, H)
        K[:m, m:] = -J.T
        K[m:, :m] = J
        step = np.linalg.lstsq(K, -F, rcond=None)[0]
        if not np.all(np.isfinite(step)) or np.linalg.norm(step[:m]) > 0.1 * np.linalg.norm(x):
            break
        x, lam = x + step[:m], lam + step[m:]
        s = stationarity(g, x)
        if s < best[0]:
            best = (s, x)
        if np.linalg.norm(step[:m]) < 1e-15 * np.linalg.norm(x):
            break
    return correct(best[1]), it


def check_milnor_image_coverage(g: MapGerm, eta: float, n: int, ds: DiscriminantSample | None = None,
                                cfg: Config | None = None, ys=None) -> ConditionReport:
    """For regular values ``y`` near 0, the closest point of ``{G = y}`` lies on M(G).

    Values are drawn as ``G(t u)`` for random directions ``u`` so they lie in
    the image; explicit ``ys`` may be passed instead and are rejected if they
    lie on a discriminant ray.
    """
    cfg = _cfg(cfg)
    ds = ds or sample_discriminant(g, cfg=cfg)
    system = milnor_set_system(g)
    eps = cfg.eps
    tols = {"stationarity": 1e-8, "fibre_residual": 1e-10, "angular_tol": cfg.angular_tol, "eta": eta, "eps": eps}
    starts = []
    if ys is not None:
        for y in np.atleast_2d(np.asarray(ys, dtype=float)):
            if np.linalg.norm(y) < cfg.tol_zero or ray_distance_direction(ds, y) < cfg.angular_tol:
                raise ValueError(f"y = {y.tolist()} lies on the discriminant")
            starts.append((y, None))
    else:
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 31]))
        attempts = 0
        while len(starts) < n and attempts < 50 * n:
            attempts += 1
            u = rng.standard_normal(g.m)
            u /= np.linalg.norm(u)
            target = eta * rng.uniform(0.3, 1.0)
            tmax = 0.999 * eps
            if np.linalg.norm(g.values(tmax * u)) <= target:
                continue
            t = brentq(lambda t: np.linalg.norm(g.values(t * u)) - target, 0.0, tmax, xtol=1e-15)
            y = g.values(t * u)
            if ray_distance_direction(ds, y) < cfg.angular_tol:
                continue
            starts.append((y, t * u))
    results, verdicts = [], []
    for k, (y, x0) in enumerate(starts):
        if x0 is None:
            seeds = eps * np.random.default_rng(np.random.SeedSequence([cfg.seed, 32, k])).uniform(
                -1, 1, (64, g.m))
            tube = DeterminantalSystem([c - Fraction(float(v)) for c, v in zip(g.components, y)], name="fibre")
            P, _, ok = project_batch(tube, seeds, NewtonOptions(tol=cfg.tol_variety))
            ok &= np.linalg.norm(P, axis=1) < eps
            if not ok.any():
                results.append({"y": y, "verdict": "inconclusive", "note": "no fibre point found"})
                verdicts.append("inconclusive")
                continue
            x0 = P[np.flatnonzero(ok)[np.argmin(np.linalg.norm(P[ok], axis=1))]]
        x, iters = _fibre_minimiser(g, np.asarray(x0, dtype=float), y)
        stat = stationarity(g, x)
        on_fibre = float(np.max(np.abs(g.values(x) - y)))
        ok = stat < 1e-8 and on_fibre < 1e-10 and np.linalg.norm(x) < eps
        results.append({"y": y, "minimiser": x, "stationarity": stat,
                        "milnor_residual": system.max_residual(x), "fibre_residual": on_fibre,
                        "iterations": iters, "verdict": "pass" if ok else "inconclusive"})
        verdicts.append(results[-1]["verdict"])
    if not results:
        verdict = "inconclusive"
    else:
        verdict = "pass" if all(v == "pass" for v in verdicts) else "inconclusive"
    return ConditionReport("milnor_image_coverage", verdict, {"values": results, "n": len(results)},
                           [], tols, cfg.seed)


def ray_distance_direction(ds: DiscriminantSample, y) -> float:
    y = np.asarray(y, dtype=float)
    ny = np.linalg.norm(y)
    if not ds.rays or ny == 0:
        return float("inf")
    return float(np.min(angle_between(ds.directions, (y / ny)[None, :])))


# --------------------------------------------------------------------------
# Milnor vector fields

MVF_EDGES = {
    "fact:milnor-set-connected": Implication("connected-milnor-set-mvf",
                                             ("nice", "cond_main", "fact:milnor-set-connected")),
    "fact:positive-fibre-dimension": Implication("fibre-dimension-mvf",
                                                 ("nice", "cond_main", "fact:positive-fibre-dimension")),
    "fact:milnor-set-empty": Implication("empty-milnor-set-mvf", ("fact:milnor-set-empty",)),
    "weights:polar": Implication("polar-homogeneous", ("weights:polar",)),
    "weights:radial": Implication("radial-homogeneous", ("weights:radial", "cond_main")),
}


def _positive_fibre_dimension(g: MapGerm, ws: WitnessSet, barrier, cfg: Config) -> bool:
    """Each component holds two distinct witnesses with equal Psi joined inside M(G) - G^-1(Disc G)."""
    comps = sorted(set(ws.component[ws.component >= 0].tolist()))
    if not comps:
        return False
    system = milnor_set_system(g)
    for c in comps:
        x = ws.points[ws.component == c][0]
        psi = g.psi(x)
        cross = [cj.scale(_frac(psi[i])) - ci.scale(_frac(psi[j]))
                 for i, ci in enumerate(g.components) for j, cj in enumerate(g.components) if i < j]
        joint = DeterminantalSystem(list(system.equations) + cross, name="milnor-psi fibre")
        res = newton_project(joint, 1.1 * x, NewtonOptions(tol=cfg.tol_variety, trust_radius=0.5 * np.linalg.norm(x)))
        if not res.success:
            return False
        x2 = res.x
        if np.linalg.norm(x2 - x) <= 10 * cfg.tol_variety:
            return False
        if angle_between(g.psi(x2), psi) > 1e-6:
            return False
        if barrier is not None and barrier(x[None, :], x2[None, :])[0]:
            return False
    return True


def _frac(v: float) -> Fraction:
    return Fraction(float(v))


def check_mvf_exists(g: MapGerm, ws, ds: DiscriminantSample | None = None, cfg: Config | None = None,
                     passed: set[str] | None = None, facts: set[str] | None = None) -> ConditionReport:
    """MVF existence from the sign of ``a(x)`` at Milnor witnesses off ``G^-1(Disc G)``.

    ``ws`` is a witness set or a list of them (one per rung).  Established
    shortcut facts are recorded in the evidence and turned into implication
    edges when their other hypotheses are in ``passed``.
    """
    cfg = _cfg(cfg)
    sets = ws if isinstance(ws, (list, tuple)) else [ws]
    retained = [w.retained() for w in sets]
    passed = set(passed or ())
    facts = set(facts or ())
    tols = {"tol_zero": cfg.tol_zero, "robust_residual": ROBUST_RESIDUAL, "fibre_psi_tol": 1e-6}
    found = set()
    total = sum(len(w) for w in retained)
    converged = sum(w.diagnostics.get("converged", len(w)) for w in sets)
    ev: dict = {"n_witnesses": total}
    if total == 0:
        if converged > 0 or not sets:
            found.add("fact:milnor-set-empty")
            ev["note"] = "no Milnor witnesses off the discriminant preimage; the bisector field works"
            verdict = "pass"
        else:
            ev["note"] = "no Milnor witnesses converged"
            verdict = "inconclusive"
    else:
        X = np.vstack([w.points for w in retained])
        R = np.concatenate([w.residuals for w in retained])
        evals = [field_eval(g, x, cfg.tol_zero) for x in X]
        a = np.array([fe.a for fe in evals])
        flagged = [i for i, fe in enumerate(evals) if "v1_zero" in fe.flags or "g_zero" in fe.flags]
        rr = np.array([fe.residual_rho for fe in evals])
        ev.update({"min_a": float(np.nanmin(a)), "max_a": float(np.nanmax(a)),
                   "max_residual_rho": float(rr.max()), "flagged": [X[i] for i in flagged]})
        if all(w.n_components == 1 for w in sets if len(w.retained())):
            found.add("fact:milnor-set-connected")
        barrier = make_barrier(g, ds, cfg) if ds is not None else None
        if _positive_fibre_dimension(g, sets[0].retained() if len(sets[0].retained()) else retained[0],
                                     barrier, cfg):
            found.add("fact:positive-fibre-dimension")
            ev["positive_fibre_dimension"] = "heuristic: two distinct witnesses on one Psi fibre per component"
        scale = float(np.nanmedian(np.abs(a))) if np.isfinite(a).any() else 1.0
        bad = (a < -1e-6 * scale) & (R < ROBUST_RESIDUAL)
        if flagged:
            verdict = "inconclusive"
            ev["note"] = "v1 vanishes (or G = 0) at some witnesses"
        elif np.all(a > 0):
            verdict = "pass"
            ev["margin"] = float(a.min())
        elif bad.any():
            verdict = "fail"
            ev["counterexample"] = X[np.flatnonzero(bad)[0]]
        else:
            verdict = "inconclusive"
    ev["facts"] = sorted(found)
    known = passed | facts | found
    edges = [e for key, e in MVF_EDGES.items() if key in known and all(h in known for h in e.hypotheses)]
    if verdict == "fail" and edges:
        ev["note"] = "a(x) <= 0 contradicts an applicable implication; treating as numerical failure"
        verdict = "inconclusive"
    elif verdict == "inconclusive" and edges:
        verdict = "pass"
        ev["by_implication"] = True
    return ConditionReport("mvf_exists", verdict, ev, edges if verdict == "pass" else [], tols, cfg.seed)
