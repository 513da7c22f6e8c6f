"""Map germs G: (R^m, 0) -> (R^p, 0) and their derived polynomial objects.

A :class:`MapGerm` is immutable; the Jacobian, the normal fields
``Omega_jk = G_j grad G_k - G_k grad G_j`` and ``||G||^2`` are computed once
on first use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .parse import ParseError, parse_mixed, parse_polynomial
from .poly import MixedFunction, Polynomial, PolyVector, minors, realified_names, realify
from .systems import DeterminantalSystem, RankSpec


class GermError(ValueError):
    """Invalid germ definition or an analysis outside a germ's admissible range."""


@dataclass(frozen=True)
class MixedOrigin:
    """Records that a real germ is the realification of a mixed function.

    When ``f`` and ``g`` are given the germ came from ``F = f * conj(g)``.
    """

    F: MixedFunction
    cnames: tuple[str, ...]
    f: MixedFunction | None = None
    g: MixedFunction | None = None

    @property
    def kind(self) -> str:
        return "fgbar" if self.f is not None else "mixed"


@dataclass(frozen=True)
class NormalFields:
    """All pairwise fields ``Omega_jk`` for ``0 <= j < k < p``."""

    pairs: tuple[tuple[int, int], ...]
    omegas: tuple[PolyVector, ...]

    def __len__(self):
        return len(self.omegas)

    def eval(self, x) -> np.ndarray:
        """Omega vectors at ``x`` as rows, shape (npairs, m)."""
        return np.array([w.eval(x) for w in self.omegas])


@dataclass(frozen=True, eq=False)
class MapGerm:
    """Polynomial map germ with components in ``m`` real variables.

    ``declared_flags`` maps user-declared facts (``thom_regular``, ``icis``,
    ``coprime``, ...) to a free-text justification; they are never verified.
    """

    components: tuple[Polynomial, ...]
    names: tuple[str, ...] = ()
    provenance: MixedOrigin | None = None
    declared_flags: Mapping[str, str] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise GermError("a germ needs at least one component")
        nv = {c.nvars for c in comps}
        if len(nv) != 1:
            raise GermError("components must share the same variables")
        object.__setattr__(self, "components", comps)
        m = comps[0].nvars
        names = tuple(self.names) or tuple(f"x{i + 1}" for i in range(m))
        if len(names) != m:
            raise GermError(f"{len(names)} variable names for {m} variables")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "declared_flags", dict(self.declared_flags))
        for i, c in enumerate(comps):
            if c.constant_term() != 0:
                raise GermError(f"component G{i + 1} does not vanish at the origin")

    @property
    def m(self) -> int:
        return self.components[0].nvars

    @property
    def p(self) -> int:
        return len(self.components)

    def require_fibration_dims(self, min_p: int = 1):
        if not self.m > self.p >= min_p:
            raise GermError(f"need m > p >= {min_p}, got m={self.m}, p={self.p}")

    def __repr__(self):
        body = ", ".join(c.to_str(self.names) for c in self.components)
        tag = f"{self.label}: " if self.label else ""
        return f"MapGerm({tag}({body}) : R^{self.m} -> R^{self.p})"

    # symbolic derived objects ----------------------------------------------

    @cached_property
    def jacobian(self) -> tuple[PolyVector, ...]:
        return tuple(c.gradient() for c in self.components)

    @cached_property
    def omegas(self) -> NormalFields:
        if self.p < 2:
            raise GermError("normal fields Omega need p >= 2")
        pairs, fields = [], []
        for j, k in combinations(range(self.p), 2):
            Gj, Gk = self.components[j], self.components[k]
            fields.append(self.jacobian[k].scale(Gj) - self.jacobian[j].scale(Gk))
            pairs.append((j, k))
        return NormalFields(tuple(pairs), tuple(fields))

    @cached_property
    def norm_squared(self) -> Polynomial:
        total = Polynomial.zero(self.m)
        for c in self.components:
            total = total + c * c
        return total

    @cached_property
    def rho(self) -> Polynomial:
        """Squared Euclidean distance to the origin."""
        total = Polynomial.zero(self.m)
        for i in range(self.m):
            v = Polynomial.var(self.m, i)
            total = total + v * v
        return total

    # numeric evaluation ----------------------------------------------------

    @cached_property
    def _G(self) -> PolyVector:
        return PolyVector(self.components)

    @cached_property
    def _J(self) -> PolyVector:
        return PolyVector([d for row in self.jacobian for d in row])

    def values(self, X) -> np.ndarray:
        """G at each row of ``X``: shape (npoints, p); 1-D input gives shape (p,)."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            return self._G.eval(X)
        return self._G.eval_many(X)

    def jacobian_values(self, X) -> np.ndarray:
        """Numeric Jacobian: shape (p, m) for a point, (npoints, p, m) for a batch."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            return self._J.eval(X).reshape(self.p, self.m)
        return self._J.eval_many(X).reshape(X.shape[0], self.p, self.m)

    @cached_property
    def _H(self) -> PolyVector:
        return PolyVector([d.diff(k) for row in self.jacobian for d in row for k in range(self.m)])

    def hessian_values(self, X) -> np.ndarray:
        """Second derivatives ``d^2 G_i / dx_j dx_k``, shape (npoints, p, m, m)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self._H.eval_many(X).reshape(X.shape[0], self.p, self.m, self.m)

    def psi(self, X) -> np.ndarray:
        """The normalised map G/||G|| (rows with G = 0 give NaN)."""
        G = self.values(X)
        with np.errstate(invalid="ignore", divide="ignore"):
            return G / np.linalg.norm(G, axis=-1, keepdims=True)


# --------------------------------------------------------------------------
# operations

def jacobian(g: MapGerm) -> tuple[PolyVector, ...]:
    """p x m matrix of exact partial derivatives, one row per component."""
    return g.jacobian


def singular_set_system(g: MapGerm) -> DeterminantalSystem:
    """All p x p Jacobian minors; their common zeros form Sing G.

    For p = 1 this is the critical locus ``grad G = 0`` (1 x 1 minors).
    """
    rows = [list(r) for r in g.jacobian]
    k = min(g.p, g.m)
    eqs = [det for _, _, det in minors(rows, k)]
    name = "Sing G" if g.p > 1 else "Sing G (p=1 extension: critical locus)"
    return DeterminantalSystem(eqs, RankSpec(tuple(g.jacobian), k - 1), name=name)


def omega_fields(g: MapGerm) -> NormalFields:
    return g.omegas


def norm_squared(g: MapGerm) -> Polynomial:
    return g.norm_squared


def germ_from_mixed(F: MixedFunction, cnames: Sequence[str] | None = None, *,
                    f: MixedFunction | None = None, g: MixedFunction | None = None,
                    flags: Mapping[str, str] | None = None, label: str = "") -> MapGerm:
    """Realify ``F`` into the germ (Re F, Im F) on R^{2n}."""
    cnames = tuple(cnames) if cnames else tuple(f"z{j + 1}" for j in range(F.nvars_complex))
    re_part, im_part = realify(F)
    return MapGerm((re_part, im_part), names=tuple(realified_names(F.nvars_complex)),
                   provenance=MixedOrigin(F, cnames, f, g), declared_flags=flags or {},
                   label=label)


# --------------------------------------------------------------------------
# germ definition files

def parse_germ_text(text: str, label: str = "") -> MapGerm:
    """Parse a germ definition.

    Real germs::

        vars: x y z
        G1 = x*y
        G2 = z^2
        flags: thom_regular

    Mixed germs give ``cvars:`` and either ``F = ...`` or both ``f = ...`` and
    ``g = ...`` (meaning ``F = f*conj(g)``).  A flag with a justification is
    written ``flag icis: text``.  ``#`` starts a comment.
    """
    variables = cvariables = None
    comps: dict[int, tuple[str, int, int]] = {}
    mixed: dict[str, tuple[str, int, int]] = {}
    flags: dict[str, str] = {}

    def fail(msg, lineno, col=0):
        raise ParseError(f"line {lineno}: {msg}", lines[lineno - 1], col)

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        head, sep, rest = stripped.partition(":")
        key = head.strip()
        if sep and key == "vars":
            variables = rest.replace(",", " ").split()
            continue
        if sep and key == "cvars":
            cvariables = rest.replace(",", " ").split()
            continue
        if sep and key == "flags":
            for name in rest.replace(",", " ").split():
                flags.setdefault(name, "declared")
            continue
        if sep and key.startswith("flag "):
            flags[key[5:].strip()] = rest.strip() or "declared"
            continue
        lhs, eq, rhs = line.partition("=")
        if not eq:
            fail("expected 'name = expression' or a header", lineno, len(raw) - len(raw.lstrip()))
        name = lhs.strip()
        col = line.index("=") + 1 + (len(rhs) - len(rhs.lstrip()))
        if name.startswith("G") and name[1:].isdigit():
            comps[int(name[1:])] = (rhs.strip(), lineno, col)
        elif name in ("F", "f", "g"):
            mixed[name] = (rhs.strip(), lineno, col)
        else:
            fail(f"unknown definition {name!r}", lineno, len(raw) - len(raw.lstrip()))

    def parse_at(fn, spec, names):
        expr, lineno, col = spec
        try:
            return fn(expr, names)
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e.message}", lines[lineno - 1], col + e.pos) from None

    if cvariables is not None:
        if comps:
            raise ParseError("G components are not allowed with cvars", text, 0)
        if "F" in mixed:
            F = parse_at(parse_mixed, mixed["F"], cvariables)
            return germ_from_mixed(F, cvariables, flags=flags, label=label)
        if "f" in mixed and "g" in mixed:
            f = parse_at(parse_mixed, mixed["f"], cvariables)
            gg = parse_at(parse_mixed, mixed["g"], cvariables)
            return germ_from_mixed(f * gg.conj(), cvariables, f=f, g=gg, flags=flags, label=label)
        raise ParseError("mixed germ needs F = ... or both f = ... and g = ...", text, 0)
    if variables is None:
        raise ParseError("missing 'vars:' header", text, 0)
    if mixed:
        raise ParseError("F/f/g definitions need a 'cvars:' header", text, 0)
    if not comps:
        raise ParseError("no components G1, G2, ... defined", text, 0)
    expected = list(range(1, len(comps) + 1))
    if sorted(comps) != expected:
        raise ParseError(f"components must be numbered G1..G{len(comps)}", text, 0)
    polys = tuple(parse_at(parse_polynomial, comps[i], variables) for i in expected)
    try:
        return MapGerm(polys, names=tuple(variables), declared_flags=flags, label=label)
    except GermError as e:
        raise ParseError(str(e), text, 0) from None


def load_germ(path) -> MapGerm:
    path = Path(path)
    return parse_germ_text(path.read_text(), label=path.stem)


def germ_to_text(g: MapGerm) -> str:
    """Serialise back to the germ file format (mixed germs keep their mixed form)."""
    lines = []
    if g.provenance is not None:
        prov = g.provenance
        lines.append("cvars: " + " ".join(prov.cnames))
        if prov.f is not None:
            lines.append(f"f = {prov.f.to_str(prov.cnames)}")
            lines.append(f"g = {prov.g.to_str(prov.cnames)}")
        else:
            lines.append(f"F = {prov.F.to_str(prov.cnames)}")
    else:
        lines.append("vars: " + " ".join(g.names))
        for i, c in enumerate(g.components, start=1):
            lines.append(f"G{i} = {c.to_str(g.names)}")
    for name, why in sorted(g.declared_flags.items()):
        lines.append(f"flag {name}: {why}")
    return "\n".join(lines) + "\n"
