"""Polynomial systems whose common zero set is a variety of interest."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .poly import Polynomial, PolyVector


@dataclass(frozen=True)
class RankSpec:
    """A polynomial matrix (one :class:`PolyVector` per row) and a target rank."""

    rows: tuple[PolyVector, ...]
    rank: int

    def matrix(self, x) -> np.ndarray:
        return np.array([row.eval(x) for row in self.rows])


def numerical_rank(A: np.ndarray, gap: float = 1e-8) -> int:
    """Number of singular values above ``gap * sigma_max``."""
    s = np.linalg.svd(np.atleast_2d(A), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > gap * s[0]))


class DeterminantalSystem:
    """Finite list of polynomial equations, optionally paired with a rank test.

    Residuals and Jacobians are evaluated in double precision from the exact
    polynomials; both are vectorised over rows of a point array.
    """

    def __init__(self, equations: Sequence[Polynomial], rank_spec: RankSpec | None = None,
                 name: str = ""):
        eqs = tuple(e for e in equations if not e.is_zero())
        if not eqs:
            if not equations:
                raise ValueError("a system needs at least one equation")
            # every equation vanished identically: the zero set is everything
            eqs = (equations[0],)
        self.equations = eqs
        self.rank_spec = rank_spec
        self.name = name
        self.nvars = eqs[0].nvars
        self._values = PolyVector(eqs)
        self._grads = PolyVector([d for e in eqs for d in e.gradient()])

    def __len__(self):
        return len(self.equations)

    def __repr__(self):
        return f"DeterminantalSystem({self.name!r}, {len(self.equations)} equations in {self.nvars} vars)"

    def residuals(self, X) -> np.ndarray:
        """Equation values, shape (npoints, nequations)."""
        return self._values.eval_many(X)

    def jacobian(self, X) -> np.ndarray:
        """Equation Jacobians, shape (npoints, nequations, nvars)."""
        X = np.atleast_2d(X)
        return self._grads.eval_many(X).reshape(X.shape[0], len(self.equations), self.nvars)

    def max_residual(self, x) -> float:
        return float(np.max(np.abs(self.residuals(np.asarray(x)[None, :])[0])))

    def is_identically_zero(self) -> bool:
        return all(e.is_zero() for e in self.equations)

    def numerical_rank(self, x, gap: float = 1e-8) -> int:
        if self.rank_spec is None:
            raise ValueError("system has no rank specification")
        return numerical_rank(self.rank_spec.matrix(x), gap)

    def rank_deficient(self, x, gap: float = 1e-8) -> bool:
        """Rank test: true iff the numerical rank is at most the target rank."""
        return self.numerical_rank(x, gap) <= self.rank_spec.rank
