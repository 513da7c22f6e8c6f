"""Milnor vector fields: tangent projections, the bisector field, fibres and the blow-away flow.

At a point ``x`` off ``G = 0`` the fibre of ``Psi = G/||G||`` through ``x`` has
normal space spanned by the fields ``Omega_jk``.  Projecting the gradients of
``||G||^2`` and ``rho = ||x||^2`` onto its tangent space gives ``v1`` and
``v2``; their normalised sum ``nu`` increases both functions while keeping
``Psi`` constant, so its flow pushes a tube fibre ``{G = eta*y}`` out to the
sphere fibre ``{Psi = y, ||x|| = eps}``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .germ import MapGerm
from .poly import Polynomial
from .report import ConditionReport
from .systems import DeterminantalSystem
from .varieties import NewtonOptions, project_batch, sphere_seeds

RANK_RTOL = 1e-10
ZERO_RTOL = 1e-12


class UnsupportedFormat(ValueError):
    pass


def angle_between(u, v) -> np.ndarray:
    """Angle between unit vectors (row-wise), accurate for small angles."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    d = np.linalg.norm(u - v, axis=-1)
    return 2.0 * np.arcsin(np.clip(d / 2.0, 0.0, 1.0))


def tangent_project(w, normals) -> np.ndarray:
    """Remove from ``w`` its component in the span of ``normals``.

    The span is orthonormalised by SVD; singular values below ``1e-10`` times
    the largest are treated as zero, so dependent normals are harmless.
    """
    w = np.asarray(w, dtype=float)
    N = np.asarray(normals, dtype=float).reshape(-1, w.size)
    if N.shape[0] == 0:
        return w.copy()
    _, s, Vt = np.linalg.svd(N, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return w.copy()
    Q = Vt[s > RANK_RTOL * s[0]]
    return w - Q.T @ (Q @ w)


def omega_values(G: np.ndarray, J: np.ndarray) -> np.ndarray:
    """Rows ``G_j grad G_k - G_k grad G_j`` for ``j < k`` from numeric G and Jacobian."""
    p = G.shape[0]
    rows = [G[j] * J[k] - G[k] * J[j] for j in range(p) for k in range(j + 1, p)]
    return np.array(rows).reshape(-1, J.shape[1])


@dataclass
class FieldEval:
    x: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    nu: np.ndarray
    a: float
    b: np.ndarray
    residual_rho: float
    flags: tuple[str, ...]
    a_lstsq: float = float("nan")
    sin2: float = float("nan")
    grad_rho: np.ndarray = field(default=None, repr=False)
    grad_gnorm2: np.ndarray = field(default=None, repr=False)
    omegas: np.ndarray = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return not self.flags


def field_eval(g: MapGerm, x, tol_zero: float = 1e-9) -> FieldEval:
    """Evaluate v1, v2, the bisector nu and the coefficients a, b at ``x``.

    ``a`` is the closed form ``<grad rho, v1>/||v1||^2``.  ``b`` (and
    ``a_lstsq``) solve ``grad rho = a grad||G||^2 + sum b_jk Omega_jk`` in the
    least-squares sense; ``residual_rho`` is the relative defect of that solve,
    which vanishes exactly on the Milnor set.  ``sin2`` is the squared sine of
    the angle between v1 and v2, i.e. the normalised Gram determinant.
    """
    x = np.asarray(x, dtype=float)
    G = g.values(x)
    J = g.jacobian_values(x)
    grad_rho = 2.0 * x
    grad_n2 = 2.0 * J.T @ G
    om = omega_values(G, J) if g.p >= 2 else np.zeros((0, g.m))
    flags = []
    gnorm = float(np.linalg.norm(G))
    if gnorm <= tol_zero:
        flags.append("g_zero")
    if g.p >= 2:
        s = np.linalg.svd(om, compute_uv=False)
        scale = gnorm * max(np.linalg.norm(J, 2), 1e-300)
        if int(np.sum(s > RANK_RTOL * scale)) < g.p - 1:
            flags.append("omega_rank_drop")
    v1 = tangent_project(grad_n2, om)
    v2 = tangent_project(grad_rho, om)
    n1, n2 = float(np.linalg.norm(v1)), float(np.linalg.norm(v2))
    if n1 <= ZERO_RTOL * max(np.linalg.norm(grad_n2), 1e-300):
        flags.append("v1_zero")
    if n2 <= ZERO_RTOL * max(np.linalg.norm(grad_rho), 1e-300):
        flags.append("v2_zero")
    if n1 > 0 and n2 > 0:
        nu = v1 / n1 + v2 / n2
        u1, u2 = v1 / n1, v2 / n2
        sin2 = 0.5 * float(np.sum((np.outer(u1, u2) - np.outer(u2, u1)) ** 2))
    else:
        nu = np.zeros_like(x)
        sin2 = float("nan")
    if "v1_zero" not in flags and "v2_zero" not in flags and np.linalg.norm(nu) < 1e-8:
        flags.append("nu_zero")
    a = float(grad_rho @ v1 / n1 ** 2) if n1 > 0 else float("nan")
    A = np.column_stack([grad_n2, om.T]) if om.size else grad_n2[:, None]
    coef, *_ = np.linalg.lstsq(A, grad_rho, rcond=None)
    defect = np.linalg.norm(A @ coef - grad_rho)
    residual_rho = float(defect / max(np.linalg.norm(grad_rho), 1e-300))
    return FieldEval(x, v1, v2, nu, a, coef[1:], residual_rho, tuple(flags), float(coef[0]),
                     sin2, grad_rho, grad_n2, om)


# --------------------------------------------------------------------------
# fibres

@dataclass
class FiberSample:
    """Points on a tube fibre ``G = eta*y`` in the open ball, or a sphere fibre ``Psi = y`` on ``S_eps``."""

    kind: str
    y: np.ndarray
    eps: float
    eta: float
    points: np.ndarray
    residuals: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return self.points.shape[0]

    @property
    def m(self) -> int:
        return self.points.shape[1]

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(self.m)] + ["residual"])
        for x, r in zip(self.points, self.residuals):
            w.writerow([repr(float(v)) for v in x] + [repr(float(r))])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    def to_ply(self, path=None) -> str:
        return points_to_ply(self.points, path)


def points_to_ply(points: np.ndarray, path=None) -> str:
    """ASCII PLY point cloud; only defined for points in R^3."""
    points = np.asarray(points, dtype=float).reshape(len(points), -1) if len(points) else np.zeros((0, 3))
    if points.shape[1] != 3:
        raise UnsupportedFormat(f"PLY export needs m = 3, got m = {points.shape[1]}")
    lines = ["ply", "format ascii 1.0", f"element vertex {len(points)}",
             "property double x", "property double y", "property double z", "end_header"]
    lines += [" ".join(repr(float(v)) for v in row) for row in points]
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def _check_direction(y, p: int, disc_rays, angular_tol: float) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape != (p,):
        raise ValueError(f"y must have {p} entries")
    if abs(np.linalg.norm(y) - 1.0) > 1e-9:
        raise ValueError("y must be a unit vector")
    if disc_rays is not None and len(disc_rays):
        ang = angle_between(np.asarray(disc_rays, dtype=float), y[None, :])
        if ang.min() <= angular_tol:
            raise ValueError(f"y lies within {angular_tol} rad of a discriminant ray")
    return y


def tube_fiber_system(g: MapGerm, y, eta: float) -> DeterminantalSystem:
    eqs = [c - Polynomial.const(g.m, Fraction(float(eta)) * Fraction(float(yi)))
           for c, yi in zip(g.components, y)]
    return DeterminantalSystem(eqs, name="tube fibre")


def sphere_fiber_system(g: MapGerm, y) -> DeterminantalSystem:
    """Cross equations ``y_i G_j - y_j G_i = 0``; together with ``<G, y> > 0`` they mean Psi = y."""
    Y = [Fraction(float(v)) for v in y]
    eqs = [c_j.scale(Y[i]) - c_i.scale(Y[j])
           for i, c_i in enumerate(g.components) for j, c_j in enumerate(g.components) if i < j]
    if not eqs:
        eqs = [Polynomial.zero(g.m)]
    return DeterminantalSystem(eqs, name="sphere fibre")


def _ball_seeds(m: int, n: int, radius: float, seed: int, task: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([seed, task, 7]))
    dirs = sphere_seeds(m, n, seed, task)
    return radius * rng.random(n)[:, None] ** (1.0 / m) * dirs


def sample_fiber(g: MapGerm, kind: str, y, eps: float, eta: float, n: int, seed: int = 0, *,
                 disc_rays=None, angular_tol: float = 1e-2, tol: float = 1e-10,
                 max_attempts: int | None = None) -> FiberSample:
    """Sample ``n`` points of the tube or sphere fibre over the unit direction ``y``.

    Rejects ``y`` within ``angular_tol`` of a ray in ``disc_rays``.  Attempts
    are made in rounds until ``n`` points are retained or ``max_attempts``
    (default ``20 n``) is reached; an empty result is returned with
    diagnostics rather than raising.
    """
    if kind not in ("tube", "sphere"):
        raise ValueError("kind must be 'tube' or 'sphere'")
    g.require_fibration_dims()
    y = _check_direction(y, g.p, disc_rays, angular_tol)
    if not 0 < eta < eps:
        raise ValueError("need 0 < eta < eps")
    max_attempts = max_attempts or 20 * n
    opts = NewtonOptions(tol=tol)
    system = tube_fiber_system(g, y, eta) if kind == "tube" else sphere_fiber_system(g, y)
    kept, res = [], []
    attempts, task = 0, 0
    while sum(len(k) for k in kept) < n and attempts < max_attempts:
        batch = min(max(2 * n, 16), max_attempts - attempts)
        if kind == "tube":
            X0 = _ball_seeds(g.m, batch, eps, seed, task)
            X, r, ok = project_batch(system, X0, opts)
            ok &= np.linalg.norm(X, axis=1) < eps
        else:
            X0 = eps * sphere_seeds(g.m, batch, seed, 1000 + task)
            X, r, ok = project_batch(system, X0, opts, sphere_radius=eps)
            ok &= np.abs(np.linalg.norm(X, axis=1) - eps) < tol
            if ok.any():
                psi = g.psi(X[ok])
                good = (psi @ y > 0) & (angle_between(psi, y[None, :]) < 1e-6)
                ok[np.flatnonzero(ok)] = good
        kept.append(X[ok])
        res.append(r[ok])
        attempts += batch
        task += 1
    P = np.vstack(kept)[:n] if kept else np.zeros((0, g.m))
    R = np.concatenate(res)[:n] if res else np.zeros(0)
    diag = {"attempts": attempts, "retained": int(len(P)), "seed": seed}
    return FiberSample(kind, y, float(eps), float(eta), P.reshape(-1, g.m), R, diag)


def sphere_fiber_residual(g: MapGerm, x, y, eps: float) -> float:
    """Scale-free defect of ``x`` as a point of ``{Psi = y, ||x|| = eps}``."""
    psi = g.psi(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(psi)):
        return float("inf")
    return float(max(angle_between(psi, y), abs(np.linalg.norm(x) - eps)))


# --------------------------------------------------------------------------
# blow-away flow

_C = np.array([0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2])
_A = [
    [],
    [1 / 4],
    [3 / 32, 9 / 32],
    [1932 / 2197, -7200 / 2197, 7296 / 2197],
    [439 / 216, -8.0, 3680 / 513, -845 / 4104],
    [-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40],
]
_B4 = np.array([25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0])
_B5 = np.array([16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55])


@dataclass(frozen=True)
class FlowOptions:
    h0: float = 1e-3
    hmin: float = 1e-12
    atol: float = 1e-11
    drift_budget: float = 1e-7
    max_steps: int = 20000
    tol_zero: float = 1e-9


@dataclass
class Trajectory:
    t: np.ndarray
    X: np.ndarray
    rho: np.ndarray
    gnorm2: np.ndarray
    psi: np.ndarray
    termination: str
    steps: int = 0
    rejected: int = 0
    note: str = ""

    @property
    def end(self) -> np.ndarray:
        return self.X[-1]

    @property
    def drift(self) -> float:
        if len(self.t) < 2:
            return 0.0
        return float(np.max(angle_between(self.psi, self.psi[:1])))

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.rho) > 0) and np.all(np.diff(self.gnorm2) > 0))

    def to_csv(self, path=None) -> str:
        m, p = self.X.shape[1], self.psi.shape[1]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"x{i + 1}" for i in range(m)] + ["rho", "gnorm2"]
                   + [f"psi_{j + 1}" for j in range(p)])
        for k in range(len(self.t)):
            w.writerow([repr(float(self.t[k]))] + [repr(float(v)) for v in self.X[k]]
                       + [repr(float(self.rho[k])), repr(float(self.gnorm2[k]))]
                       + [repr(float(v)) for v in self.psi[k]])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


def _velocity(g: MapGerm, x: np.ndarray, tol_zero: float):
    fe = field_eval(g, x, tol_zero)
    if fe.flags:
        return None, fe.flags
    return fe.nu / np.linalg.norm(fe.nu), ()


def _rk_step(g, x, h, k1, tol_zero):
    ks = [k1]
    for i in range(1, 6):
        xi = x + h * sum(a * k for a, k in zip(_A[i], ks))
        v, flags = _velocity(g, xi, tol_zero)
        if v is None:
            return None, None, flags
        ks.append(v)
    K = np.array(ks)
    x4 = x + h * (_B4 @ K)
    err = h * np.linalg.norm((_B5 - _B4) @ K)
    return x4, err, ()


def blow_away(g: MapGerm, x0, eps: float, opts: FlowOptions | None = None) -> Trajectory:
    """Integrate ``dx/dt = nu/||nu||`` from ``x0`` until ``||x|| = eps``.

    Adaptive Runge-Kutta-Fehlberg 4(5), advancing with the 4th-order
    solution.  A step is accepted only when the local error estimate is within
    ``atol * eps``, both ``rho`` and ``||G||^2`` strictly increase and the
    change of ``Psi`` over the step is at most ``drift_budget * h / eps``.  A
    degenerate field (zero v1/v2, rank drop of the Omegas, ``G = 0``) that
    persists down to ``hmin`` ends the run with ``termination = degeneracy``.
    The last step is shortened by root finding so that the end point lies on
    the sphere to within 1e-10.
    """
    opts = opts or FlowOptions()
    x = np.asarray(x0, dtype=float).copy()
    G0 = g.values(x)

    def sample(xx):
        G = g.values(xx)
        n2 = float(G @ G)
        return float(xx @ xx), n2, G / np.sqrt(n2) if n2 > 0 else np.full(g.p, np.nan)

    rho, n2, psi0 = sample(x)
    T, Xs, R, N2, PS = [0.0], [x.copy()], [rho], [n2], [psi0]

    def done(term, steps, rejected, note=""):
        return Trajectory(np.array(T), np.array(Xs), np.array(R), np.array(N2), np.array(PS),
                          term, steps, rejected, note)

    r0 = np.linalg.norm(x)
    if abs(r0 - eps) <= 1e-10:
        return done("reached_sphere", 0, 0)
    if r0 > eps:
        return done("left_domain", 0, 0, "start point outside the ball")
    if np.linalg.norm(G0) <= opts.tol_zero:
        return done("degeneracy", 0, 0, "G(x0) = 0")
    k1, flags = _velocity(g, x, opts.tol_zero)
    if k1 is None:
        return done("degeneracy", 0, 0, "flags at x0: " + ",".join(flags))

    t, h = 0.0, min(opts.h0 * eps, eps - r0)
    steps = rejected = 0
    atol = opts.atol * eps
    psi_prev = psi0
    while steps < opts.max_steps:
        if h < opts.hmin * eps:
            return done("degeneracy", steps, rejected, "step size underflow")
        xn, err, flags = _rk_step(g, x, h, k1, opts.tol_zero)
        if xn is None or not np.all(np.isfinite(xn)):
            rejected += 1
            h *= 0.5
            continue
        if err > atol:
            rejected += 1
            h *= max(0.2, 0.9 * (atol / err) ** 0.2)
            continue
        crossing = np.linalg.norm(xn) >= eps
        if crossing:
            def excess(s, x=x, k1=k1):
                xs, _, fl = _rk_step(g, x, s, k1, opts.tol_zero)
                return (np.linalg.norm(xs) if xs is not None else np.inf) - eps
            s = brentq(excess, 0.0, h, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=200)
            xs, _, _ = _rk_step(g, x, s, k1, opts.tol_zero)
            if xs is None or excess(s) < -1e-10:
                # root just inside; nudge to the upper bracket side
                s = min(h, s + 1e-12)
                xs, _, _ = _rk_step(g, x, s, k1, opts.tol_zero)
            xn, hn = xs, s
        else:
            hn = h
        rho_n, n2_n, psi_n = sample(xn)
        drift_step = float(angle_between(psi_n, psi_prev))
        monotone = rho_n > R[-1] and n2_n > N2[-1]
        drifting = drift_step > 1e-15 and drift_step > opts.drift_budget * hn / eps
        if not monotone or drifting:
            rejected += 1
            h *= 0.5
            continue
        t += hn
        x = xn
        T.append(t)
        Xs.append(x.copy())
        R.append(rho_n)
        N2.append(n2_n)
        PS.append(psi_n)
        psi_prev = psi_n
        steps += 1
        if crossing:
            if abs(np.linalg.norm(x) - eps) <= 1e-10:
                return done("reached_sphere", steps, rejected)
            return done("left_domain", steps, rejected, "sphere crossing not resolved")
        k1, flags = _velocity(g, x, opts.tol_zero)
        if k1 is None:
            return done("degeneracy", steps, rejected, "flags: " + ",".join(flags))
        grow = 5.0 if err == 0 else min(5.0, 0.9 * (atol / err) ** 0.2)
        h = min(h * max(1.0, grow), 0.05 * eps)
    return done("reached_max_steps", steps, rejected)


# --------------------------------------------------------------------------
# arcs of the circle minus discriminant rays (p = 2)

def arcs(disc_rays) -> list[tuple[float, float]]:
    """Open arcs of S^1 between consecutive ray angles, as (start, end) with end > start.

    With no rays the whole circle is one arc ``(0, 2 pi)``.
    """
    if disc_rays is None or len(disc_rays) == 0:
        return [(0.0, 2 * np.pi)]
    ang = np.sort(np.mod(np.arctan2(np.asarray(disc_rays)[:, 1], np.asarray(disc_rays)[:, 0]), 2 * np.pi))
    out = [(float(ang[i]), float(ang[i + 1])) for i in range(len(ang) - 1)]
    out.append((float(ang[-1]), float(ang[0] + 2 * np.pi)))
    return out


def arc_id(y, disc_rays) -> int:
    theta = float(np.mod(np.arctan2(y[1], y[0]), 2 * np.pi))
    for i, (a, b) in enumerate(arcs(disc_rays)):
        if a < theta < b or a < theta + 2 * np.pi < b:
            return i
    return -1


def arc_representatives(disc_rays) -> list[np.ndarray]:
    """Midpoint direction of every arc."""
    reps = []
    for a, b in arcs(disc_rays):
        mid = 0.5 * (a + b)
        reps.append(np.array([np.cos(mid), np.sin(mid)]))
    return reps


# --------------------------------------------------------------------------
# tube versus sphere evidence

@dataclass
class EquivalenceRun:
    y: np.ndarray
    tube: FiberSample
    sphere: FiberSample
    trajectories: list[Trajectory]
    report: ConditionReport


def _psi_hits(g: MapGerm, y, eps: float, seed: int, n: int = 4000, tol: float = 1e-2) -> int:
    """How many quasi-uniform points of the ball have Psi within ``tol`` of ``y``."""
    X = _ball_seeds(g.m, n, eps, seed, 99)
    psi = g.psi(X)
    ok = np.all(np.isfinite(psi), axis=1)
    return int(np.sum(angle_between(psi[ok], np.asarray(y)[None, :]) < tol))


def run_equivalence(g: MapGerm, y, eps: float, eta: float, n: int, seed: int = 0, *,
                    disc_rays=None, angular_tol: float = 1e-2, drift_tol: float = 1e-6,
                    residual_tol: float = 1e-6, flow: FlowOptions | None = None,
                    tolerances: dict | None = None) -> EquivalenceRun:
    y = _check_direction(y, g.p, disc_rays, angular_tol)
    tube = sample_fiber(g, "tube", y, eps, eta, n, seed, disc_rays=disc_rays, angular_tol=angular_tol)
    sphere = sample_fiber(g, "sphere", y, eps, eta, n, seed, disc_rays=disc_rays,
                          angular_tol=angular_tol)
    ev = {"y": y, "eps": eps, "eta": eta, "n_requested": n, "n_tube": len(tube),
          "n_sphere": len(sphere)}
    if g.p == 2:
        ev["arc_id"] = arc_id(y, disc_rays)
    tols = dict(tolerances or {}, drift_tol=drift_tol, residual_tol=residual_tol)

    if len(tube) == 0 or len(sphere) == 0:
        hits = _psi_hits(g, y, eps, seed)
        ev["psi_image_hits"] = hits
        if len(tube) == 0 and len(sphere) == 0 and hits == 0:
            ev["note"] = "both fibres empty: y lies outside the image of Psi near 0"
            verdict = "pass"
        else:
            ev["note"] = "one fibre sample is empty"
            verdict = "inconclusive"
        rep = ConditionReport("equivalence_evidence", verdict, ev, [], tols, seed)
        return EquivalenceRun(y, tube, sphere, [], rep)

    trajs = [blow_away(g, x0, eps, flow) for x0 in tube.points]
    terms = [tr.termination for tr in trajs]
    drifts = np.array([tr.drift for tr in trajs])
    monotone = [tr.monotone for tr in trajs]
    residuals = np.array([sphere_fiber_residual(g, tr.end, y, eps) if tr.termination == "reached_sphere"
                          else np.inf for tr in trajs])
    ev.update({
        "terminations": {k: terms.count(k) for k in sorted(set(terms))},
        "max_drift": float(drifts.max()),
        "max_sphere_residual": float(residuals.max()),
        "all_monotone": all(monotone),
        "total_steps": int(sum(tr.steps for tr in trajs)),
    })
    if any(t == "degeneracy" for t in terms):
        bad = [i for i, t in enumerate(terms) if t == "degeneracy"]
        ev["degenerate_trajectories"] = [{"index": i, "x0": trajs[i].X[0], "last": trajs[i].end,
                                          "note": trajs[i].note} for i in bad]
        verdict = "inconclusive"
    elif all(t == "reached_sphere" for t in terms) and all(monotone) \
            and drifts.max() < drift_tol and residuals.max() < residual_tol:
        verdict = "pass"
    elif all(t == "reached_sphere" for t in terms) and all(monotone):
        verdict = "fail"
    else:
        verdict = "inconclusive"
    rep = ConditionReport("equivalence_evidence", verdict, ev, [], tols, seed)
    return EquivalenceRun(y, tube, sphere, trajs, rep)


def equivalence_evidence(g: MapGerm, y, eps: float, eta: float, n: int, seed: int = 0,
                         **kw) -> ConditionReport:
    """Blow ``n`` tube-fibre points over ``y`` to the sphere and check they land on the sphere fibre."""
    return run_equivalence(g, y, eps, eta, n, seed, **kw).report
