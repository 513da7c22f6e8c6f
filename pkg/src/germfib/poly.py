"""Exact sparse multivariate polynomials over the rationals.

A :class:`Polynomial` maps exponent tuples to :class:`fractions.Fraction`
coefficients.  Arithmetic is exact; floating point only enters through
:meth:`Polynomial.eval` and the vectorised :class:`PolyVector` evaluator.

Mixed functions ``F(z, conj(z))`` are held by :class:`MixedFunction` with
Gaussian-rational coefficients and are turned into pairs of real polynomials
by :func:`realify`, using the real variable order ``(x1, y1, ..., xn, yn)``
with ``z_j = x_j + i*y_j``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponent = tuple[int, ...]
Number = int | Fraction


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        # exact binary value of the float
        return Fraction(c)
    return Fraction(c)


def _grlex_key(exp: Exponent):
    return (sum(exp), exp)


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables with rational coefficients.

    Terms are stored in descending graded-lexicographic order, so equal
    polynomials have identical ``terms`` tuples and string forms.
    """

    __slots__ = ("nvars", "_terms", "_index", "_compiled")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Number] | Iterable = ()):
        if nvars < 1:
            raise ValueError(f"nvars must be positive, got {nvars}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, Fraction] = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            acc[exp] = acc.get(exp, Fraction(0)) + _frac(coeff)
        ordered = sorted(((e, c) for e, c in acc.items() if c != 0),
                         key=lambda t: _grlex_key(t[0]), reverse=True)
        self.nvars = nvars
        self._terms = tuple(ordered)
        self._index = dict(ordered)
        self._compiled = None

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value: Number) -> Polynomial:
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def var(cls, nvars: int, idx: int) -> Polynomial:
        if not 0 <= idx < nvars:
            raise ValueError(f"variable index {idx} out of range for nvars={nvars}")
        exp = [0] * nvars
        exp[idx] = 1
        return cls(nvars, {tuple(exp): 1})

    # basic accessors --------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[Exponent, Fraction], ...]:
        return self._terms

    def coeff(self, exp: Exponent) -> Fraction:
        return self._index.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e, _ in self._terms)

    def constant_term(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self._terms), default=-1)

    @property
    def low_degree(self) -> int:
        """Smallest total degree of a term (-1 for the zero polynomial)."""
        return min((sum(e) for e, _ in self._terms), default=-1)

    def monomials(self) -> list[Exponent]:
        return [e for e, _ in self._terms]

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._index)
        for e, c in other._terms:
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self._terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Polynomial.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number) -> Polynomial:
        c = _frac(c)
        return Polynomial(self.nvars, {e: c * v for e, v in self._terms})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, self._terms))

    # calculus ---------------------------------------------------------------

    def diff(self, i: int) -> Polynomial:
        """Exact partial derivative with respect to variable ``i``."""
        if not 0 <= i < self.nvars:
            raise ValueError(f"variable index {i} out of range")
        out = {}
        for e, c in self._terms:
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Polynomial(self.nvars, out)

    def gradient(self) -> PolyVector:
        return PolyVector([self.diff(i) for i in range(self.nvars)])

    def substitute(self, values: Sequence[Polynomial]) -> Polynomial:
        """Compose with polynomials ``values[i]`` substituted for variable ``i``."""
        if len(values) != self.nvars:
            raise ValueError("need one substitute per variable")
        n = values[0].nvars
        total = Polynomial.zero(n)
        for e, c in self._terms:
            mono = Polynomial.const(n, c)
            for v, k in zip(values, e):
                if k:
                    mono = mono * v ** k
            total = total + mono
        return total

    # evaluation -------------------------------------------------------------

    def _arrays(self):
        if self._compiled is None:
            if self._terms:
                exps = np.array([e for e, _ in self._terms], dtype=np.int64)
                coeffs = np.array([float(c) for _, c in self._terms])
            else:
                exps = np.zeros((0, self.nvars), dtype=np.int64)
                coeffs = np.zeros(0)
            self._compiled = (exps, coeffs)
        return self._compiled

    def eval(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.nvars,):
            raise ValueError(f"point has shape {x.shape}, expected ({self.nvars},)")
        exps, coeffs = self._arrays()
        if not len(coeffs):
            return 0.0
        return float(np.prod(x[None, :] ** exps, axis=1) @ coeffs)

    def eval_many(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.nvars:
            raise ValueError(f"points have {X.shape[1]} coordinates, expected {self.nvars}")
        exps, coeffs = self._arrays()
        if not len(coeffs):
            return np.zeros(X.shape[0])
        return _monomials(X, exps) @ coeffs

    # printing ---------------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names else [f"x{i + 1}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            factors = []
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_str()!r})"


def _monomials(X: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """Matrix of monomial values, shape (npoints, nterms)."""
    if exps.shape[0] == 0:
        return np.zeros((X.shape[0], 0))
    # integer powers via repeated products keep exact zeros and signs
    out = np.ones((X.shape[0], exps.shape[0]))
    for j in range(exps.shape[1]):
        col = exps[:, j]
        if not col.any():
            continue
        maxk = int(col.max())
        powers = np.ones((maxk + 1, X.shape[0]))
        for k in range(1, maxk + 1):
            powers[k] = powers[k - 1] * X[:, j]
        out *= powers[col].T
    return out


class PolyVector:
    """A sequence of polynomials sharing ``nvars``, evaluated jointly."""

    __slots__ = ("entries", "nvars", "_compiled")

    def __init__(self, entries: Sequence[Polynomial]):
        entries = tuple(entries)
        if not entries:
            raise ValueError("PolyVector needs at least one entry")
        nv = {e.nvars for e in entries}
        if len(nv) != 1:
            raise ValueError(f"entries disagree on nvars: {sorted(nv)}")
        self.entries = entries
        self.nvars = nv.pop()
        self._compiled = None

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if isinstance(other, PolyVector):
            return self.entries == other.entries
        if isinstance(other, (list, tuple)):
            return list(self.entries) == list(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "PolyVector([" + ", ".join(e.to_str() for e in self.entries) + "])"

    def __add__(self, other: PolyVector) -> PolyVector:
        return PolyVector([a + b for a, b in zip(self.entries, other.entries, strict=True)])

    def __sub__(self, other: PolyVector) -> PolyVector:
        return PolyVector([a - b for a, b in zip(self.entries, other.entries, strict=True)])

    def scale(self, p: Polynomial) -> PolyVector:
        return PolyVector([p * e for e in self.entries])

    def dot(self, other: PolyVector) -> Polynomial:
        total = Polynomial.zero(self.nvars)
        for a, b in zip(self.entries, other.entries, strict=True):
            total = total + a * b
        return total

    def _arrays(self):
        if self._compiled is None:
            monos = sorted({e for p in self.entries for e, _ in p.terms},
                           key=_grlex_key, reverse=True)
            pos = {e: i for i, e in enumerate(monos)}
            C = np.zeros((len(monos), len(self.entries)))
            for k, p in enumerate(self.entries):
                for e, c in p.terms:
                    C[pos[e], k] = float(c)
            exps = (np.array(monos, dtype=np.int64) if monos
                    else np.zeros((0, self.nvars), dtype=np.int64))
            self._compiled = (exps, C)
        return self._compiled

    def eval(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.nvars,):
            raise ValueError(f"point has shape {x.shape}, expected ({self.nvars},)")
        return self.eval_many(x[None, :])[0]

    def eval_many(self, X) -> np.ndarray:
        """Values at each row of ``X``; shape (npoints, len(self))."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.nvars:
            raise ValueError(f"points have {X.shape[1]} coordinates, expected {self.nvars}")
        exps, C = self._arrays()
        if exps.shape[0] == 0:
            return np.zeros((X.shape[0], len(self.entries)))
        return _monomials(X, exps) @ C


def eval(p: Polynomial, x) -> float:  # noqa: A001 - mirrors the operation name
    """Evaluate ``p`` at the real point ``x`` in double precision."""
    return p.eval(x)


def gradient(p: Polynomial) -> PolyVector:
    """Exact gradient of ``p`` as a :class:`PolyVector`."""
    return p.gradient()


def determinant(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Exact determinant of a square matrix of polynomials (Leibniz expansion)."""
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("determinant needs a nonempty square matrix")
    nvars = rows[0][0].nvars
    total = Polynomial.zero(nvars)
    for perm in permutations(range(n)):
        inversions = sum(1 for i, j in combinations(range(n), 2) if perm[i] > perm[j])
        term = Polynomial.const(nvars, -1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
            if term.is_zero():
                break
        total = total + term
    return total


def minors(rows: Sequence[Sequence[Polynomial]], k: int) -> list[tuple[tuple, tuple, Polynomial]]:
    """All k-by-k minors of a polynomial matrix as ``(row_idx, col_idx, det)``."""
    nrows, ncols = len(rows), len(rows[0])
    out = []
    for ri in combinations(range(nrows), k):
        for ci in combinations(range(ncols), k):
            sub = [[rows[r][c] for c in ci] for r in ri]
            out.append((ri, ci, determinant(sub)))
    return out


# --------------------------------------------------------------------------
# mixed functions

QQi = tuple[Fraction, Fraction]
MixedKey = tuple[Exponent, Exponent]


def _qmul(a: QQi, b: QQi) -> QQi:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _qnonzero(a: QQi) -> bool:
    return a[0] != 0 or a[1] != 0


class MixedFunction:
    """Polynomial in ``z`` and ``conj(z)`` with Gaussian-rational coefficients.

    ``terms`` maps ``(nu, mu)`` to ``(re, im)`` for the monomial
    ``z^nu * conj(z)^mu``.
    """

    __slots__ = ("nvars_complex", "_terms", "_index")

    def __init__(self, nvars_complex: int, terms=()):
        if nvars_complex < 1:
            raise ValueError("nvars_complex must be positive")
        n = nvars_complex
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[MixedKey, QQi] = {}
        for (nu, mu), c in items:
            nu, mu = tuple(int(v) for v in nu), tuple(int(v) for v in mu)
            if len(nu) != n or len(mu) != n:
                raise ValueError("exponent length mismatch")
            if isinstance(c, tuple):
                c = (_frac(c[0]), _frac(c[1]))
            elif isinstance(c, complex):
                c = (_frac(c.real), _frac(c.imag))
            else:
                c = (_frac(c), Fraction(0))
            old = acc.get((nu, mu), (Fraction(0), Fraction(0)))
            acc[(nu, mu)] = (old[0] + c[0], old[1] + c[1])
        ordered = sorted(((k, v) for k, v in acc.items() if _qnonzero(v)),
                         key=lambda t: (sum(t[0][0]) + sum(t[0][1]), t[0]), reverse=True)
        self.nvars_complex = n
        self._terms = tuple(ordered)
        self._index = dict(ordered)

    @classmethod
    def const(cls, n: int, value, imag: Number = 0) -> MixedFunction:
        return cls(n, {((0,) * n, (0,) * n): (_frac(value), _frac(imag))})

    @classmethod
    def var(cls, n: int, idx: int, conjugate: bool = False) -> MixedFunction:
        e = [0] * n
        e[idx] = 1
        z = (0,) * n
        key = (z, tuple(e)) if conjugate else (tuple(e), z)
        return cls(n, {key: 1})

    @property
    def terms(self):
        return self._terms

    def is_constant(self) -> bool:
        return all(sum(nu) + sum(mu) == 0 for (nu, mu), _ in self._terms)

    def constant_value(self) -> QQi:
        z = (0,) * self.nvars_complex
        return self._index.get((z, z), (Fraction(0), Fraction(0)))

    def _coerce(self, other):
        if isinstance(other, MixedFunction):
            if other.nvars_complex != self.nvars_complex:
                raise ValueError("nvars_complex mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return MixedFunction.const(self.nvars_complex, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MixedFunction(self.nvars_complex, list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self):
        return MixedFunction(self.nvars_complex, [(k, (-c[0], -c[1])) for k, c in self._terms])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = []
        for (nu1, mu1), c1 in self._terms:
            for (nu2, mu2), c2 in other._terms:
                key = (tuple(a + b for a, b in zip(nu1, nu2)),
                       tuple(a + b for a, b in zip(mu1, mu2)))
                out.append((key, _qmul(c1, c2)))
        return MixedFunction(self.nvars_complex, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = MixedFunction.const(self.nvars_complex, 1)
        for _ in range(k):
            result = result * self
        return result

    def conj(self) -> MixedFunction:
        return MixedFunction(self.nvars_complex,
                             [((mu, nu), (c[0], -c[1])) for (nu, mu), c in self._terms])

    def __eq__(self, other):
        if not isinstance(other, MixedFunction):
            return NotImplemented
        return self.nvars_complex == other.nvars_complex and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars_complex, self._terms))

    def eval(self, z) -> complex:
        """Evaluate at a complex point ``z`` (length ``nvars_complex``)."""
        z = np.asarray(z, dtype=complex)
        if z.shape != (self.nvars_complex,):
            raise ValueError(f"point has shape {z.shape}, expected ({self.nvars_complex},)")
        zc = np.conj(z)
        total = 0j
        for (nu, mu), c in self._terms:
            total += complex(float(c[0]), float(c[1])) * np.prod(z ** np.array(nu)) * np.prod(zc ** np.array(mu))
        return complex(total)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        n = self.nvars_complex
        names = list(names) if names else [f"z{i + 1}" for i in range(n)]
        if not self._terms:
            return "0"
        parts = []
        for (nu, mu), (re, im) in self._terms:
            factors = []
            for name, a, b in zip(names, nu, mu):
                if a:
                    factors.append(name if a == 1 else f"{name}^{a}")
                if b:
                    factors.append(f"conj({name})" if b == 1 else f"conj({name})^{b}")
            if im == 0:
                coeff = str(re)
            elif re == 0:
                coeff = f"{im}*I"
            else:
                coeff = f"({re} + {im}*I)"
            parts.append("*".join([coeff] + factors) if coeff != "1" or not factors
                         else "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"MixedFunction({self.nvars_complex}, {self.to_str()!r})"


def realify(F: MixedFunction) -> tuple[Polynomial, Polynomial]:
    """Split ``F`` into ``(Re F, Im F)`` over the variables ``(x1, y1, ..., xn, yn)``."""
    n = F.nvars_complex
    m = 2 * n
    one = Polynomial.const(m, 1)
    zero = Polynomial.zero(m)
    xs = [Polynomial.var(m, 2 * j) for j in range(n)]
    ys = [Polynomial.var(m, 2 * j + 1) for j in range(n)]

    def cmul(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    # cached powers of z_j and conj(z_j) as (re, im) polynomial pairs
    cache: dict[tuple[int, int, bool], tuple[Polynomial, Polynomial]] = {}

    def power(j, k, conjugate):
        key = (j, k, conjugate)
        if key not in cache:
            if k == 0:
                cache[key] = (one, zero)
            else:
                prev = power(j, k - 1, conjugate)
                base = (xs[j], -ys[j] if conjugate else ys[j])
                cache[key] = cmul(prev, base)
        return cache[key]

    re_total, im_total = zero, zero
    for (nu, mu), (cr, ci) in F.terms:
        acc = (Polynomial.const(m, cr), Polynomial.const(m, ci))
        for j in range(n):
            if nu[j]:
                acc = cmul(acc, power(j, nu[j], False))
            if mu[j]:
                acc = cmul(acc, power(j, mu[j], True))
        re_total = re_total + acc[0]
        im_total = im_total + acc[1]
    return re_total, im_total


def realified_names(n: int) -> list[str]:
    """Real variable names ``x1, y1, ..., xn, yn`` for ``n`` complex variables."""
    out = []
    for j in range(1, n + 1):
        out += [f"x{j}", f"y{j}"]
    return out


def complex_to_real(z) -> np.ndarray:
    """Interleave real and imaginary parts: ``(x1, y1, ..., xn, yn)``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out
