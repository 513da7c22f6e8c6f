"""Radial and polar weighted homogeneity.

A real germ is radial weighted-homogeneous with weights ``q`` (positive,
coprime) and degree ``d`` when ``G(t.x) = t^d G(x)`` for ``t > 0``, where
``t.x = (t^q1 x1, ..., t^qm xm)``.  A mixed function is polar
weighted-homogeneous of degree ``k`` when ``F(l.z) = l^k F(z)`` for ``l`` on
the unit circle, ``l.z = (l^p1 z1, ..., l^pn zn)``.

Detection is by bounded enumeration, which is exact and deterministic for the
small weights that occur in practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .germ import MapGerm
from .poly import MixedFunction, Polynomial, PolyVector

DEFAULT_BOUND = 12


@dataclass(frozen=True)
class RadialWeights:
    q: tuple[int, ...]
    d: int

    def to_json(self) -> dict:
        return {"q": list(self.q), "d": self.d}


@dataclass(frozen=True)
class PolarWeights:
    p: tuple[int, ...]
    k: int

    def to_json(self) -> dict:
        return {"p": list(self.p), "k": self.k}


def _candidates(values: np.ndarray, k: int):
    """Yield blocks of the cartesian power ``values^k`` (one block per leading value)."""
    if k == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    rest = np.stack(np.meshgrid(*([values] * (k - 1)), indexing="ij"), axis=-1).reshape(-1, k - 1) \
        if k > 1 else np.zeros((1, 0), dtype=np.int64)
    for v in values:
        yield np.hstack([np.full((rest.shape[0], 1), v, dtype=np.int64), rest])


def detect_radial_weights(g: MapGerm, bound: int = DEFAULT_BOUND) -> RadialWeights | None:
    """Smallest-degree positive coprime weights making every monomial of G have equal weighted degree.

    Ties at the smallest degree are broken by the lexicographically smallest
    weight vector.  Variables that appear in no monomial get weight 1.
    Returns ``None`` when no weights up to ``bound`` work.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    exps = np.array([e for c in g.components for e in c.monomials()], dtype=np.int64)
    if exps.size == 0:
        return None
    used = np.flatnonzero(exps.any(axis=0))
    A = exps[:, used]
    best = None
    for Q in _candidates(np.arange(1, bound + 1, dtype=np.int64), used.size):
        degs = Q @ A.T
        ok = np.all(degs == degs[:, :1], axis=1)
        if not ok.any():
            continue
        for row, d in zip(Q[ok], degs[ok, 0]):
            q = np.ones(g.m, dtype=np.int64)
            q[used] = row
            if math.gcd(*q.tolist()) != 1:
                continue
            key = (int(d), tuple(int(v) for v in q))
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return RadialWeights(best[1], best[0])


def _mixed_of(F) -> MixedFunction:
    if isinstance(F, MapGerm):
        if F.provenance is None:
            raise ValueError("germ has no mixed-function provenance")
        return F.provenance.F
    return F


def detect_polar_weights(F, bound: int = DEFAULT_BOUND) -> PolarWeights | None:
    """Nonzero coprime integer weights with ``sum p_j (nu_j - mu_j) = k > 0`` on every term.

    Canonical choice: smallest ``k``, then smallest ``max |p_j|``, then fewest
    negative weights, then lexicographic.  Accepts a :class:`MixedFunction` or
    a germ realified from one.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    F = _mixed_of(F)
    if not F.terms:
        return None
    D = np.array([[a - b for a, b in zip(nu, mu)] for (nu, mu), _ in F.terms], dtype=np.int64)
    used = np.flatnonzero(D.any(axis=0))
    if used.size == 0:
        return None
    A = D[:, used]
    values = np.array([v for v in range(-bound, bound + 1) if v != 0], dtype=np.int64)
    best = None
    for P in _candidates(values, used.size):
        ks = P @ A.T
        ok = np.all(ks == ks[:, :1], axis=1) & (ks[:, 0] > 0)
        if not ok.any():
            continue
        for row, k in zip(P[ok], ks[ok, 0]):
            p = np.ones(F.nvars_complex, dtype=np.int64)
            p[used] = row
            if math.gcd(*np.abs(p).tolist()) != 1:
                continue
            key = (int(k), int(np.abs(p).max()), int((p < 0).sum()), tuple(int(v) for v in p))
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return PolarWeights(best[3], best[0])


def verify_radial_action(g: MapGerm, w: RadialWeights, trials: int = 100, seed: int = 0,
                         tol: float = 1e-10) -> bool:
    """Check ``G(t.x) = t^d G(x)`` at random ``t in [0.1, 2]`` and ``x in [-1, 1]^m``."""
    if len(w.q) != g.m:
        return False
    rng = np.random.default_rng(seed)
    q = np.array(w.q, dtype=float)
    t = rng.uniform(0.1, 2.0, trials)
    X = rng.uniform(-1.0, 1.0, (trials, g.m))
    TX = X * t[:, None] ** q[None, :]
    lhs = g.values(TX)
    rhs = (t ** w.d)[:, None] * g.values(X)
    err = np.linalg.norm(lhs - rhs, axis=1)
    return bool(np.all(err < tol * (1 + np.linalg.norm(lhs, axis=1))))


def verify_polar_action(F, w: PolarWeights, trials: int = 100, seed: int = 0,
                        tol: float = 1e-10) -> bool:
    """Check ``F(l.z) = l^k F(z)`` for random ``l`` on the unit circle and ``|z_j| <= 1``."""
    F = _mixed_of(F)
    n = F.nvars_complex
    if len(w.p) != n:
        return False
    rng = np.random.default_rng(seed)
    p = np.array(w.p)
    for _ in range(trials):
        lam = np.exp(1j * rng.uniform(0, 2 * np.pi))
        z = np.sqrt(rng.uniform(0, 1, n)) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        fz = F.eval(z)
        lhs = F.eval(lam ** p * z)
        if abs(lhs - lam ** w.k * fz) >= tol * (1 + abs(fz)):
            return False
    return True


def euler_field(w: RadialWeights) -> PolyVector:
    """The weighted Euler field ``(q1 x1, ..., qm xm)``."""
    m = len(w.q)
    return PolyVector([Polynomial.var(m, i).scale(q) for i, q in enumerate(w.q)])
