"""The full pipeline for one germ and the on-disk report bundle."""

from __future__ import annotations

import datetime as _dt
import json
import platform
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .conditions import (DiscriminantSample, check_condition_main, check_milnor_image_coverage,
                         check_mvf_exists, check_niceness, check_radial_discriminant,
                         check_rho_regularity_psi, milnor_witnesses, ray_distance_direction,
                         sample_discriminant)
from .config import Config
from .flow import FiberSample, FlowOptions, Trajectory, arc_representatives, run_equivalence
from .germ import MapGerm, germ_to_text
from .homogeneity import (detect_polar_weights, detect_radial_weights, verify_polar_action,
                          verify_radial_action)
from .report import ConditionReport, Implication, dumps, implication_problems
from .varieties import WitnessSet


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (maps to exit code 3)."""


TUBE_EDGES = (
    Implication("cond-main-tube", ("nice", "cond_main")),
    Implication("radial-homogeneous", ("weights:radial", "cond_main")),
    Implication("polar-homogeneous", ("weights:polar",)),
)
SPHERE_EDGES = (
    Implication("rho-regular-sphere", ("nice", "radial_disc", "cond_main", "rho_regular_psi")),
    Implication("mvf-blow-away", ("tube_exists", "mvf_exists")),
    Implication("radial-homogeneous", ("weights:radial", "cond_main")),
    Implication("polar-homogeneous", ("weights:polar",)),
)
EQUIVALENCE_EDGES = (
    Implication("fibre-equivalence", ("tube_exists", "sphere_exists", "rho_regular_psi")),
    Implication("mvf-blow-away", ("tube_exists", "mvf_exists")),
)


@dataclass
class AnalysisBundle:
    germ: MapGerm
    reports: list[ConditionReport]
    config: Config
    witness_sets: dict[str, WitnessSet] = field(default_factory=dict)
    weights: dict = field(default_factory=dict)
    facts: set[str] = field(default_factory=set)
    discriminant: DiscriminantSample | None = None
    fibers: dict[str, FiberSample] = field(default_factory=dict)
    trajectories: dict[str, Trajectory] = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)
    tool_version: str = __version__

    def verdicts(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for r in self.reports:
            out.setdefault(r.condition, []).append(r.verdict)
        return out

    def report(self, condition: str) -> ConditionReport:
        for r in self.reports:
            if r.condition == condition:
                return r
        raise KeyError(condition)

    def to_json(self) -> dict:
        g = self.germ
        return {
            "tool_version": self.tool_version,
            "germ": {"label": g.label, "m": g.m, "p": g.p, "text": germ_to_text(g)},
            "config": self.config.tolerances(),
            "seed": self.config.seed,
            "weights": self.weights,
            "facts": sorted(self.facts),
            "discriminant": self.discriminant,
            "reports": [r.to_json() for r in self.reports],
            "witness_sets": {name: {"n": len(ws), "n_excluded": int(ws.excluded.sum()),
                                    "n_components": ws.n_components, "diagnostics": ws.diagnostics}
                             for name, ws in sorted(self.witness_sets.items())},
            "artifacts": sorted(self.artifacts),
        }

    def dumps(self) -> str:
        return dumps(self.to_json())

    def write(self, outdir) -> Path:
        """Write report.json, a metadata sidecar, the germ and all CSV artifacts."""
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        arts = []
        (out / "germ.gm").write_text(germ_to_text(self.germ))
        arts.append("germ.gm")
        for sub, items in (("witnesses", self.witness_sets), ("fibers", self.fibers),
                           ("trajectories", self.trajectories)):
            if not items:
                continue
            (out / sub).mkdir(exist_ok=True)
            for name, obj in sorted(items.items()):
                rel = f"{sub}/{name}.csv"
                obj.to_csv(out / rel)
                arts.append(rel)
        self.artifacts = arts
        (out / "report.json").write_text(self.dumps())
        meta = {"timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
                "python": platform.python_version(), "numpy": np.__version__,
                "tool_version": self.tool_version}
        (out / "metadata.json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
        return out


def _implied(condition: str, edges, passed: set[str], facts: set[str], evidence: dict,
             seed: int) -> ConditionReport:
    known = passed | facts
    ok = [e for e in edges if all(h in known for h in e.hypotheses)]
    verdict = "pass" if ok else "inconclusive"
    if not ok:
        evidence = dict(evidence, note="no implication with all hypotheses established")
    return ConditionReport(condition, verdict, evidence, ok, {}, seed)


def _passed(reports: list[ConditionReport]) -> set[str]:
    good = {r.condition for r in reports if r.passed}
    return good - {r.condition for r in reports if not r.passed}


def equivalence_directions(g: MapGerm, ds: DiscriminantSample, cfg: Config) -> list[np.ndarray]:
    """One target direction per connected piece of the unit sphere minus the discriminant rays."""
    if g.p == 1:
        return [np.array([1.0]), np.array([-1.0])]
    if g.p == 2:
        return arc_representatives(ds.directions if ds.rays else None)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 77]))
    for _ in range(1000):
        x = rng.standard_normal(g.m)
        G = g.values(cfg.eps * 0.5 * x / np.linalg.norm(x))
        if np.linalg.norm(G) > cfg.tol_zero and ray_distance_direction(ds, G) > 10 * cfg.angular_tol:
            return [G / np.linalg.norm(G)]
    return []


def analyze(g: MapGerm, cfg: Config | None = None, *, scale_sweep: bool = False) -> AnalysisBundle:
    """Run every check in dependency order and assemble a bundle.

    Numerical inconclusiveness never aborts; an unsound implication graph
    raises :class:`InvariantViolation`.
    """
    cfg = cfg or Config()
    seed = cfg.seed
    reports: list[ConditionReport] = []
    facts = {f"flag:{name}" for name in g.declared_flags}
    bundle = AnalysisBundle(g, reports, cfg, facts=facts)

    nice = check_niceness(g, cfg)
    reports.append(nice)
    facts.update(nice.evidence.get("facts", []))

    rw = detect_radial_weights(g, cfg.weight_bound)
    if rw is not None and verify_radial_action(g, rw, trials=1000, seed=seed):
        facts.add("weights:radial")
    bundle.weights["radial"] = rw
    # mixed germs are tested for radial weights through their real and imaginary parts
    bundle.weights["radial_detection"] = "realified" if g.provenance is not None else "real"
    pw = None
    if g.provenance is not None:
        pw = detect_polar_weights(g, cfg.weight_bound)
        if pw is not None and verify_polar_action(g, pw, trials=1000, seed=seed):
            facts.add("weights:polar")
    bundle.weights["polar"] = pw

    ds = sample_discriminant(g, cfg=cfg)
    bundle.discriminant = ds
    reports.append(check_radial_discriminant(ds, cfg))

    fib_ok = g.m > g.p
    if not fib_ok:
        note = {"note": f"fibration checks need m > p (m={g.m}, p={g.p})"}
        for cond in ("cond_main", "rho_regular_psi", "tube_exists", "mvf_exists", "sphere_exists",
                     "equivalence_evidence"):
            reports.append(ConditionReport(cond, "inconclusive", dict(note), [], {}, seed))
        _check_dag(bundle)
        return bundle

    witnesses = milnor_witnesses(g, ds, cfg=cfg)
    for ws in witnesses:
        bundle.witness_sets[ws.name] = ws
    reports.append(check_condition_main(g, ds=ds, cfg=cfg, witnesses=witnesses))
    reports.append(check_rho_regularity_psi(g, ds=ds, cfg=cfg))

    coverage = check_milnor_image_coverage(g, cfg.eta_value, cfg.n_coverage, ds, cfg)
    reports.append(coverage)
    reports.append(_implied("tube_exists", TUBE_EDGES, _passed(reports), facts,
                            {"milnor_image_coverage": coverage.verdict}, seed))

    mvf = check_mvf_exists(g, witnesses, ds, cfg, passed=_passed(reports), facts=facts)
    facts.update(mvf.evidence.get("facts", []))
    reports.append(mvf)
    reports.append(_implied("sphere_exists", SPHERE_EDGES, _passed(reports), facts, {}, seed))

    flow = FlowOptions(drift_budget=cfg.drift_budget, max_steps=cfg.max_steps, tol_zero=cfg.tol_zero)
    scales = [cfg.eps, cfg.eps / 2] if scale_sweep else [cfg.eps]
    rays = ds.directions if ds.rays else None
    passed_before = _passed(reports)
    for si, eps in enumerate(scales):
        eta = cfg.eta_value * eps / cfg.eps
        for k, y in enumerate(equivalence_directions(g, ds, cfg)):
            run = run_equivalence(g, y, eps, eta, cfg.n_blow, seed, disc_rays=rays,
                                  angular_tol=cfg.angular_tol, drift_tol=cfg.drift_tol,
                                  residual_tol=cfg.fiber_residual_tol, flow=flow)
            rep = run.report
            rep.evidence["component"] = k
            if rep.passed:
                rep.implied_by = [e for e in EQUIVALENCE_EDGES
                                  if all(h in passed_before or h in facts for h in e.hypotheses)]
            reports.append(rep)
            tag = f"s{si}_c{k}"
            if len(run.tube):
                bundle.fibers[f"tube_{tag}"] = run.tube
            if len(run.sphere):
                bundle.fibers[f"sphere_{tag}"] = run.sphere
            for i, tr in enumerate(run.trajectories):
                bundle.trajectories[f"{tag}_{i:03d}"] = tr
    _check_dag(bundle)
    return bundle


def _check_dag(bundle: AnalysisBundle):
    problems = implication_problems(bundle.reports, bundle.facts)
    if problems:
        raise InvariantViolation("; ".join(problems))
