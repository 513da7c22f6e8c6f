"""Machine-readable condition reports and the implication graph between them."""

from __future__ import annotations

import json
import math
from graphlib import CycleError, TopologicalSorter
from dataclasses import dataclass, field

import numpy as np

VERDICTS = ("pass", "fail", "inconclusive")
CONDITIONS = ("nice", "radial_disc", "cond_main", "rho_regular_psi", "mvf_exists",
              "tube_exists", "sphere_exists", "equivalence_evidence", "milnor_image_coverage")


@dataclass(frozen=True)
class Implication:
    """A named theorem used as an edge: its hypotheses imply the report's condition.

    Hypotheses are condition ids (which must have verdict ``pass`` in the same
    bundle) or fact strings such as ``weights:radial`` or ``flag:icis``.
    """

    theorem: str
    hypotheses: tuple[str, ...]
    note: str = ""

    def to_json(self) -> dict:
        out = {"theorem": self.theorem, "hypotheses": list(self.hypotheses)}
        if self.note:
            out["note"] = self.note
        return out


# Edge names used across the package.  Each maps to one published result.
EDGES = {
    "image-neighbourhood-nice": "Sing G meets G^-1(0) in a proper subset, so Im G contains a neighbourhood of 0",
    "fgbar-coprime-nice": "f*conj(g) with f, g coprime is nice",
    "radial-homogeneous": "radial weighted-homogeneous germ satisfying cond_main: nice, radial discriminant, "
                          "tube and sphere fibrations exist and are equivalent",
    "polar-homogeneous": "polar weighted-homogeneous mixed function: nice, Disc = {0}, tube and sphere "
                         "fibrations exist and are equivalent",
    "cond-main-tube": "nice germ satisfying cond_main has a tube fibration",
    "rho-regular-sphere": "nice germ with radial discriminant, cond_main and rho-regular G/||G|| has a sphere "
                          "fibration",
    "mvf-blow-away": "a Milnor vector field carries tube fibres onto sphere fibres",
    "fibre-equivalence": "rho-regular G/||G|| with both fibrations: fibres over each component are isotopic",
    "a-positive-mvf": "a Milnor vector field exists iff a(x) > 0 on M(G) minus G^-1(Disc G)",
    "connected-milnor-set-mvf": "M(G) minus G^-1(Disc G) connected implies a Milnor vector field",
    "fibre-dimension-mvf": "every component of M(G) minus G^-1(Disc G) meets some Psi-fibre in positive "
                           "dimension implies a Milnor vector field",
    "empty-milnor-set-mvf": "the bisector field is a Milnor vector field off M(G)",
}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    return obj


@dataclass
class ConditionReport:
    condition: str
    verdict: str
    evidence: dict = field(default_factory=dict)
    implied_by: list[Implication] = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise ValueError(f"unknown condition {self.condition!r}")
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "verdict": self.verdict,
            "evidence": _jsonable(self.evidence),
            "implied_by": [e.to_json() for e in self.implied_by],
            "tolerances": _jsonable(self.tolerances),
            "seed": self.seed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, shortest round-trip floats)."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def satisfied(edge: Implication, passed: set[str], facts: set[str]) -> bool:
    return all(h in passed or h in facts for h in edge.hypotheses)


def implication_problems(reports: list[ConditionReport], facts: set[str]) -> list[str]:
    """Edges whose hypotheses are not all pass/established; empty means the DAG is sound."""
    passed = {r.condition for r in reports if r.passed}
    # a condition counts as pass only if every report for it passes
    for r in reports:
        if not r.passed:
            passed.discard(r.condition)
    problems = []
    for r in reports:
        for edge in r.implied_by:
            missing = [h for h in edge.hypotheses if h not in passed and h not in facts]
            if missing:
                problems.append(f"{r.condition} <- {edge.theorem}: unmet {missing}")
    graph: dict[str, set[str]] = {}
    for r in reports:
        for edge in r.implied_by:
            graph.setdefault(r.condition, set()).update(h for h in edge.hypotheses if h in CONDITIONS)
    try:
        tuple(TopologicalSorter(graph).static_order())
    except CycleError as e:
        problems.append(f"implication cycle: {e.args[1]}")
    return problems
