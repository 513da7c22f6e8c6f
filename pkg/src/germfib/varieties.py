"""Milnor-set systems, Newton projection, witness sampling and clustering.

Witness points are sampled on spheres ``||x|| = r`` around the origin (or in
annuli), which is how germ-at-the-origin statements are probed numerically:
the same computation is repeated down a ladder of radii.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree
from scipy.stats import norm as _normal
from scipy.stats import qmc

from .germ import GermError, MapGerm
from .poly import Polynomial, PolyVector, minors
from .systems import DeterminantalSystem, RankSpec

TOL_VARIETY = 1e-10


def _grad_rho(m: int) -> PolyVector:
    return PolyVector([Polynomial.var(m, i).scale(2) for i in range(m)])


def milnor_set_system(g: MapGerm) -> DeterminantalSystem:
    """(p+1)-minors of the matrix with rows grad(rho), grad(G_1), ..., grad(G_p).

    Their common zero set is the Milnor set M(G): the points where the sphere
    through x fails to be transverse to the fibre of G.
    """
    if g.m <= g.p:
        raise GermError(f"Milnor set needs m > p (got m={g.m}, p={g.p})")
    rows = (_grad_rho(g.m),) + tuple(g.jacobian)
    eqs = [det for _, _, det in minors([list(r) for r in rows], g.p + 1)]
    return DeterminantalSystem(eqs, RankSpec(rows, g.p), name="M(G)")


def psi_milnor_set_system(g: MapGerm) -> DeterminantalSystem:
    """Locus where grad(rho) lies in the span of the Omega fields.

    Off ``G = 0`` the Omegas span the normal space of the fibre of G/||G||, so
    this is the rho-nonregular locus of G/||G||.  For p = 2 the equations are
    the 2x2 minors of (grad rho, Omega_12); for p > 2 they are the p x p minors
    of the stacked matrix (Omega_jk..., grad rho), which has rank <= p - 1
    exactly there.  Points of ``G = 0`` satisfy every equation and must be
    filtered out by the caller.
    """
    if g.p < 2:
        raise GermError("M(Psi_G) needs p >= 2")
    omegas = g.omegas.omegas
    rows = tuple(omegas) + (_grad_rho(g.m),)
    if g.p == 2:
        mats = [list(_grad_rho(g.m)), list(omegas[0])]
        eqs = [det for _, _, det in minors(mats, 2)]
    else:
        eqs = [det for _, _, det in minors([list(r) for r in rows], g.p)]
    return DeterminantalSystem(eqs, RankSpec(rows, g.p - 1), name="M(Psi_G)")


# --------------------------------------------------------------------------
# Gauss-Newton

@dataclass(frozen=True)
class NewtonOptions:
    tol: float = TOL_VARIETY
    max_iter: int = 50
    trust_radius: float = np.inf
    polish: int = 3
    rcond: float = 1e-13


@dataclass
class NewtonResult:
    x: np.ndarray
    success: bool
    residual: float
    iterations: int
    reason: str = ""


def _gauss_newton(res_fn, jac_fn, X0: np.ndarray, opts: NewtonOptions):
    """Minimum-norm Gauss-Newton on a batch of start points.

    Returns (X, max_abs_residual, converged_mask, iterations).
    """
    X = np.array(X0, dtype=float, copy=True)
    N = X.shape[0]
    R = res_fn(X)
    err = np.max(np.abs(R), axis=1) if R.shape[1] else np.zeros(N)
    iters = np.zeros(N, dtype=int)
    done = err < opts.tol
    extra = np.zeros(N, dtype=int)
    active = ~done | False
    # points that converge keep polishing for a few iterations while improving
    polishing = np.zeros(N, dtype=bool)
    for _ in range(opts.max_iter + opts.polish):
        idx = np.flatnonzero(active | polishing)
        if idx.size == 0:
            break
        J = jac_fn(X[idx])
        step = -np.einsum("nme,ne->nm", np.linalg.pinv(J, rcond=opts.rcond), R[idx])
        t = np.ones(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        Xn = X[idx].copy()
        Rn = R[idx].copy()
        En = err[idx].copy()
        for _ in range(12):
            trial = X[idx] + t[:, None] * step
            Rt = res_fn(trial)
            Et = np.max(np.abs(Rt), axis=1)
            better = ~accepted & np.isfinite(Et) & (Et < err[idx])
            Xn[better], Rn[better], En[better] = trial[better], Rt[better], Et[better]
            accepted |= better
            if accepted.all():
                break
            t = np.where(accepted, t, t * 0.5)
        X[idx], R[idx], err[idx] = Xn, Rn, En
        iters[idx] += 1
        was_polishing = polishing[idx]
        extra[idx[was_polishing]] += 1
        # a polishing point stops when it no longer improves or runs out of budget
        stop_polish = was_polishing & (~accepted | (extra[idx] >= opts.polish))
        polishing[idx[stop_polish]] = False
        newly = ~was_polishing & (En < opts.tol)
        active[idx[newly]] = False
        done[idx[newly]] = True
        polishing[idx[newly]] = opts.polish > 0
        stuck = ~was_polishing & ~accepted & ~newly
        active[idx[stuck]] = False
        over = active & (iters >= opts.max_iter)
        active[over] = False
    ok = done & (err < opts.tol)
    return X, err, ok, iters


def newton_project(system: DeterminantalSystem, x0, opts: NewtonOptions | None = None) -> NewtonResult:
    """Project ``x0`` onto the zero set of ``system`` by Gauss-Newton.

    Failure is reported through ``NewtonResult.success``, never raised.
    A start point that already satisfies the system is returned unchanged.
    """
    opts = opts or NewtonOptions()
    x0 = np.asarray(x0, dtype=float)
    if not np.all(np.isfinite(x0)):
        return NewtonResult(x0.copy(), False, np.inf, 0, "non-finite start")
    r0 = system.max_residual(x0)
    if r0 < opts.tol:
        return NewtonResult(x0.copy(), True, r0, 0, "start point on variety")
    X, err, ok, iters = _gauss_newton(system.residuals, system.jacobian, x0[None, :], opts)
    x = X[0]
    success = bool(ok[0])
    reason = "converged" if success else "no convergence"
    if success and np.linalg.norm(x - x0) > opts.trust_radius:
        success, reason = False, "left trust region"
    return NewtonResult(x, success, float(err[0]), int(iters[0]), reason)


def project_batch(system: DeterminantalSystem, X0, opts: NewtonOptions | None = None,
                  sphere_radius: float | None = None):
    """Vectorised projection; with ``sphere_radius`` the constraint ||x|| = r is added.

    On a sphere the problem is solved in ``u = x/r`` with every equation
    divided by ``r`` to the power of its lowest degree, so that residuals and
    the tolerance are independent of the radius.  The returned residual is
    this scale-free one (for ``r <= 1`` it bounds the raw residual).

    Returns (X, variety_residual, success_mask).
    """
    opts = opts or NewtonOptions()
    X0 = np.atleast_2d(np.asarray(X0, dtype=float))
    if sphere_radius is None:
        X, err, ok, _ = _gauss_newton(system.residuals, system.jacobian, X0, opts)
        var_res = np.max(np.abs(system.residuals(X)), axis=1)
    else:
        r = float(sphere_radius)
        scale = np.array([r ** max(e.low_degree, 0) for e in system.equations])

        def res_fn(U):
            return np.hstack([system.residuals(r * U) / scale, (np.sum(U * U, axis=1) - 1.0)[:, None]])

        def jac_fn(U):
            return np.concatenate([system.jacobian(r * U) * (r / scale)[None, :, None], 2 * U[:, None, :]],
                                  axis=1)

        U, err, ok, _ = _gauss_newton(res_fn, jac_fn, X0 / r, opts)
        X = r * U
        var_res = np.max(np.abs(system.residuals(X) / scale), axis=1)
    ok &= var_res < opts.tol
    if np.isfinite(opts.trust_radius):
        ok &= np.linalg.norm(X - X0, axis=1) <= opts.trust_radius
    return X, var_res, ok


def refine_rank_deficient(rows_fn, hess_fn, X, r: float, opts: NewtonOptions | None = None):
    """Polish points where a p x m matrix ``A(x)`` drops rank, on the sphere ``||x|| = r``.

    Solves ``A(x)^T lam = 0, ||lam|| = 1, ||x|| = r`` by Gauss-Newton from
    ``lam`` = the left singular vector of the smallest singular value.  Unlike
    the minors, this system is usually reduced, so points converge to full
    precision even where the minors vanish to high order.  ``rows_fn(X)``
    gives ``A`` with shape (N, p, m); ``hess_fn(X)`` gives ``dA/dx`` with shape
    (N, p, m, m).  Returns (X, success_mask).
    """
    opts = opts or NewtonOptions(tol=1e-12)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if len(X) == 0:
        return X.copy(), np.zeros(0, dtype=bool)
    A = rows_fn(X)
    N, p, m = A.shape
    U_, s_, _ = np.linalg.svd(A)
    lam0 = U_[:, :, -1]
    scale = np.maximum(np.linalg.norm(A, axis=(1, 2)), 1e-300)
    Z0 = np.hstack([X / r, lam0, scale[:, None]])

    def split(Z):
        return Z[:, :m], Z[:, m:m + p], Z[:, -1]

    def res_fn(Z):
        U, lam, s = split(Z)
        At = rows_fn(r * U)
        core = np.einsum("npm,np->nm", At, lam) / s[:, None]
        return np.hstack([core, (np.sum(lam * lam, axis=1) - 1)[:, None], (np.sum(U * U, axis=1) - 1)[:, None]])

    def jac_fn(Z):
        U, lam, s = split(Z)
        n = len(Z)
        At = rows_fn(r * U)
        H = hess_fn(r * U)
        J = np.zeros((n, m + 2, m + p + 1))
        J[:, :m, :m] = r * np.einsum("npmk,np->nmk", H, lam) / s[:, None, None]
        J[:, :m, m:m + p] = np.transpose(At, (0, 2, 1)) / s[:, None, None]
        J[:, m, m:m + p] = 2 * lam
        J[:, m + 1, :m] = 2 * U
        return J

    Z, err, ok, _ = _gauss_newton(res_fn, jac_fn, Z0, opts)
    Xr = r * Z[:, :m]
    ok &= np.linalg.norm(Xr - X, axis=1) < 0.1 * r
    return Xr, ok


# --------------------------------------------------------------------------
# witness sets

@dataclass
class WitnessSet:
    """Sample points on a variety with residuals, radii and component tags."""

    points: np.ndarray
    residuals: np.ndarray
    component: np.ndarray
    excluded: np.ndarray
    name: str = ""
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def empty(cls, m: int, name: str = "", diagnostics: dict | None = None) -> WitnessSet:
        return cls(np.zeros((0, m)), np.zeros(0), np.zeros(0, dtype=int),
                   np.zeros(0, dtype=bool), name, diagnostics or {})

    @property
    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.points, axis=1)

    @property
    def m(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def subset(self, mask) -> WitnessSet:
        mask = np.asarray(mask)
        return replace(self, points=self.points[mask], residuals=self.residuals[mask],
                       component=self.component[mask], excluded=self.excluded[mask],
                       diagnostics=dict(self.diagnostics))

    def retained(self) -> WitnessSet:
        """Points not tagged as lying in the preimage of the discriminant."""
        return self.subset(~self.excluded)

    @property
    def n_components(self) -> int:
        ids = self.component[self.component >= 0]
        return int(np.unique(ids).size)

    def merge(self, other: WitnessSet) -> WitnessSet:
        return WitnessSet(np.vstack([self.points, other.points]),
                          np.concatenate([self.residuals, other.residuals]),
                          np.concatenate([self.component, other.component]),
                          np.concatenate([self.excluded, other.excluded]),
                          self.name, dict(self.diagnostics))

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(self.m)] + ["residual", "radius", "component", "excluded"])
        for x, res, rad, c, e in zip(self.points, self.residuals, self.radii,
                                     self.component, self.excluded):
            w.writerow([repr(float(v)) for v in x] + [repr(float(res)), repr(float(rad)),
                                                     int(c), int(bool(e))])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, text: str, name: str = "") -> WitnessSet:
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        m = len(header) - 4
        if not body:
            return cls.empty(m, name)
        arr = np.array([[float(v) for v in r] for r in body])
        return cls(arr[:, :m], arr[:, m], arr[:, m + 2].astype(int),
                   arr[:, m + 3].astype(bool), name)


def sphere_seeds(m: int, n: int, seed: int, task: int = 0) -> np.ndarray:
    """Quasi-uniform points on the unit sphere S^{m-1}.

    A scrambled Halton sequence pushed through the normal quantile function
    and normalised; deterministic in ``(seed, task)``.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, task]))
    sampler = qmc.Halton(d=m, scramble=True, seed=rng)
    U = sampler.random(n)
    U = np.clip(U, 1e-12, 1 - 1e-12)
    Z = _normal.ppf(U)
    norms = np.linalg.norm(Z, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return Z / norms


def witness_sample(system: DeterminantalSystem, region, n: int, seed: int, *,
                   exclude: Callable[[np.ndarray], np.ndarray] | None = None,
                   keep: Callable[[np.ndarray], np.ndarray] | None = None,
                   opts: NewtonOptions | None = None, task: int = 0) -> WitnessSet:
    """Sample the zero set of ``system`` on a sphere or in an annulus.

    ``region`` is a radius ``r`` (points are constrained to ``||x|| = r``) or a
    pair ``(r1, r2)`` (points are projected freely and kept if
    ``r1 <= ||x|| <= r2``).  ``keep`` drops points outright (e.g. those on
    ``G = 0`` for M(Psi_G)); ``exclude`` only tags them.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    opts = opts or NewtonOptions()
    m = system.nvars
    seeds = sphere_seeds(m, n, seed, task)
    if np.ndim(region) == 0:
        r = float(region)
        X, res, ok = project_batch(system, r * seeds, opts, sphere_radius=r)
        ok &= np.abs(np.linalg.norm(X, axis=1) - r) < opts.tol
        label = f"r={r!r}"
    else:
        r1, r2 = map(float, region)
        rng = np.random.default_rng(np.random.SeedSequence([seed, task, 1]))
        radii = r1 + (r2 - r1) * rng.random(n)
        X, res, ok = project_batch(system, radii[:, None] * seeds, opts)
        rad = np.linalg.norm(X, axis=1)
        ok &= (rad >= r1) & (rad <= r2)
        label = f"annulus=({r1!r}, {r2!r})"
    converged = int(ok.sum())
    if keep is not None and ok.any():
        ok[ok] = np.asarray(keep(X[ok]), dtype=bool)
    diag = {"attempts": n, "converged": converged, "retained": int(ok.sum()),
            "region": label, "seed": seed, "task": task}
    if not ok.any():
        return WitnessSet.empty(m, system.name, diag)
    X, res = X[ok], res[ok]
    excl = np.asarray(exclude(X), dtype=bool) if exclude is not None else np.zeros(len(X), dtype=bool)
    diag["excluded"] = int(excl.sum())
    return WitnessSet(X, res, np.full(len(X), -1), excl, system.name, diag)


def cluster_components(ws: WitnessSet, link_scale: float = 0.2, *,
                       barrier: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
                       density_factor: float = 2.0) -> WitnessSet:
    """Single-linkage clustering of the non-excluded points.

    Two points are linked when their distance is below the link distance and,
    if ``barrier`` is given, the segment between them is not blocked.  The
    link distance is ``link_scale`` times the median radius, raised to
    ``density_factor`` times the median distance to the third nearest
    neighbour so that sparse samples of surfaces do not shatter.  Component
    ids are 0, 1, ... ordered by the lexicographically smallest point of each
    component; excluded points get -1.
    """
    out = replace(ws, component=np.full(len(ws), -1), diagnostics=dict(ws.diagnostics))
    idx = np.flatnonzero(~ws.excluded)
    if idx.size == 0:
        return out
    P = ws.points[idx]
    tree = cKDTree(P)
    scale = link_scale * float(np.median(np.linalg.norm(P, axis=1)))
    if len(P) > 3 and density_factor > 0:
        knn, _ = tree.query(P, k=4)
        scale = max(scale, density_factor * float(np.median(knn[:, 3])))
    pairs = tree.query_pairs(scale, output_type="ndarray") if scale > 0 else np.zeros((0, 2), int)
    if barrier is not None and len(pairs):
        blocked = np.asarray(barrier(P[pairs[:, 0]], P[pairs[:, 1]]), dtype=bool)
        pairs = pairs[~blocked]
    k = len(P)
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(k, k))
    ncomp, labels = connected_components(graph, directed=False)
    reps = []
    for c in range(ncomp):
        members = P[labels == c]
        order = np.lexsort(members.T[::-1])
        reps.append((tuple(members[order[0]]), c))
    relabel = {c: new for new, (_, c) in enumerate(sorted(reps))}
    out.component[idx] = [relabel[c] for c in labels]
    out.diagnostics["link_distance"] = scale
    return out
