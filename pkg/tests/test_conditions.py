import copy
import json

import numpy as np
import pytest

from germfib import (ConditionReport, Implication, MapGerm, WitnessSet, catalog_germ, check_condition_main,
                     check_milnor_image_coverage, check_mvf_exists, check_niceness,
                     check_radial_discriminant, check_rho_regularity_psi, sample_discriminant)
from germfib.conditions import DiscriminantSample, Ray, milnor_witnesses, ray_distance, stationarity
from germfib.report import dumps, implication_problems


def _rot(theta):
    return np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])


def _ray_sample(step):
    """Three rays rotating by ``step`` radians from one rung to the next."""
    base = np.array([[0.0, 1.0], [1.0, 0.0], [-1.0, 0.0]])
    rungs = [(0.5 / 2 ** k, base @ _rot(k * step).T) for k in range(4)]
    return DiscriminantSample([Ray(d, [r for r, _ in rungs]) for d in base], False, "not_computed",
                              rungs, {"seed": 0})


# -- niceness -------------------------------------------------------------------

@pytest.mark.parametrize("name, criterion", [
    ("xy_z2", "radial-weights"),
    ("ex31_n3", "image-neighbourhood"),
    ("linear_proj_3_2", "image-neighbourhood"),
])
def test_niceness_criteria(name, criterion, cfg):
    rep = check_niceness(catalog_germ(name), cfg)
    assert rep.verdict == "pass"
    assert rep.evidence["criterion"] == criterion
    assert rep.implied_by


def test_niceness_is_never_refuted(cfg):
    rep = check_niceness(catalog_germ("nonnice_x_xy"), cfg)
    assert rep.verdict == "inconclusive"
    assert rep.evidence["tried"] == ["image-neighbourhood", "fgbar-coprime", "radial-weights", "polar-weights"]


# -- discriminant ---------------------------------------------------------------

def test_discriminant_of_xy_z2(xy_z2, cfg):
    ds = sample_discriminant(xy_z2, cfg=cfg)
    assert sorted(map(tuple, np.round(ds.directions, 6))) == [(-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)]
    assert all(len(r.radii) == cfg.rungs for r in ds.rays)
    assert ds.boundary_status == "not_computed"
    rep = check_radial_discriminant(ds, cfg)
    assert rep.verdict == "pass"
    assert "caveat" in rep.evidence


def test_regular_germs_have_trivial_discriminant(cfg):
    ds = sample_discriminant(catalog_germ("linear_proj_4_2"), cfg=cfg)
    assert ds.origin_only
    assert ds.boundary_status == "empty_by_criterion"
    assert check_radial_discriminant(ds, cfg).verdict == "pass"


@pytest.mark.parametrize("step, verdict", [(0.0, "pass"), (0.03, "inconclusive"), (0.2, "fail")])
def test_rotating_discriminant(step, verdict, cfg):
    rep = check_radial_discriminant(_ray_sample(step), cfg)
    assert rep.verdict == verdict
    assert rep.evidence["max_hausdorff"] == pytest.approx(step, abs=1e-9)


def test_radiality_needs_two_rungs(cfg):
    ds = _ray_sample(0.0)
    ds.rung_directions = ds.rung_directions[:1]
    assert check_radial_discriminant(ds, cfg).verdict == "inconclusive"


def test_bad_boundary_status():
    with pytest.raises(ValueError):
        DiscriminantSample([], True, "unknown")


# -- cond_main ------------------------------------------------------------------

def test_cond_main_passes_on_xy_z2(xy_z2, cfg):
    rep = check_condition_main(xy_z2, cfg=cfg)
    assert rep.verdict == "pass"
    assert rep.evidence["min_ratio"] >= cfg.cond_main_ratio
    assert "no finite certificate" in rep.evidence["evidence_kind"]


def test_cond_main_fails_on_injected_witnesses_touching_vg(xy_z2, cfg):
    # points of the x-axis lie on M(G) and on G = 0: the ratio is 0 with exact residuals
    ladder = (0.5, 0.25)
    sets = []
    for r in ladder:
        t = np.linspace(-1, 1, 12)
        P = r * np.column_stack([np.ones_like(t), np.zeros_like(t), np.zeros_like(t)]) * np.sign(t)[:, None]
        sets.append(WitnessSet(P, np.zeros(len(P)), np.zeros(len(P), dtype=int), np.zeros(len(P), dtype=bool),
                               diagnostics={"converged": len(P)}))
    rep = check_condition_main(xy_z2, ladder=ladder, cfg=cfg, witnesses=sets)
    assert rep.verdict == "fail"
    assert rep.evidence["min_ratio"] == 0.0


def test_cond_main_vacuous_and_too_few(xy_z2, cfg):
    empty = WitnessSet.empty(3, diagnostics={"converged": 10})
    few = WitnessSet(0.25 * np.array([[1.0, 1.0, 0.0]]) / np.sqrt(2), np.zeros(1), np.zeros(1, dtype=int),
                     np.zeros(1, dtype=bool), diagnostics={"converged": 1})
    rep = check_condition_main(xy_z2, ladder=(0.5, 0.25), cfg=cfg, witnesses=[empty, few])
    assert [r["verdict"] for r in rep.evidence["rungs"]] == ["pass", "inconclusive"]
    assert rep.verdict == "inconclusive"


# -- rho-regularity of Psi ------------------------------------------------------

def test_rho_regularity_passes_on_xy_z2(xy_z2, cfg):
    assert check_rho_regularity_psi(xy_z2, cfg=cfg).verdict == "pass"


def test_rho_regularity_fails_when_a_ray_is_missing(xy_z2, cfg):
    # with the horizontal rays removed, M(Psi) points on z = 0 become counterexamples
    ds = copy.deepcopy(sample_discriminant(xy_z2, cfg=cfg))
    ds.rays = [r for r in ds.rays if r.direction[1] > 0.5]
    rep = check_rho_regularity_psi(xy_z2, ds=ds, cfg=cfg)
    assert rep.verdict == "fail"
    x = rep.evidence["rungs"][0]["counterexample"]
    assert abs(x[2]) < 1e-8
    assert ray_distance(xy_z2, ds, x)[0] > 10 * cfg.angular_tol


def test_rho_regularity_is_vacuous_for_functions(cfg):
    g = catalog_germ("xy_z2")
    f = MapGerm(g.components[:1], names=g.names)
    assert check_rho_regularity_psi(f, cfg=cfg).verdict == "pass"


# -- coverage -------------------------------------------------------------------

def test_fibre_minimisers_lie_on_the_milnor_set(xy_z2, cfg):
    rep = check_milnor_image_coverage(xy_z2, cfg.eta_value, 6, cfg=cfg)
    assert rep.verdict == "pass"
    for v in rep.evidence["values"]:
        assert v["stationarity"] < 1e-8
        assert v["fibre_residual"] < 1e-10
        assert stationarity(xy_z2, np.asarray(v["minimiser"])) < 1e-8


def test_coverage_rejects_values_on_the_discriminant(xy_z2, cfg):
    ds = sample_discriminant(xy_z2, cfg=cfg)
    with pytest.raises(ValueError):
        check_milnor_image_coverage(xy_z2, cfg.eta_value, 1, ds, cfg, ys=[[0.0, 0.003]])


def test_explicit_values(xy_z2, cfg):
    ds = sample_discriminant(xy_z2, cfg=cfg)
    rep = check_milnor_image_coverage(xy_z2, cfg.eta_value, 1, ds, cfg, ys=[[0.003, 0.004]])
    assert rep.verdict == "pass"


# -- Milnor vector field ----------------------------------------------------------

def test_mvf_exists_on_xy_z2(xy_z2, cfg):
    ds = sample_discriminant(xy_z2, cfg=cfg)
    ws = milnor_witnesses(xy_z2, ds, cfg=cfg)
    rep = check_mvf_exists(xy_z2, ws, ds, cfg, passed={"nice", "cond_main"}, facts={"weights:radial"})
    assert rep.verdict == "pass"
    assert rep.evidence["min_a"] > 0
    assert "fact:positive-fibre-dimension" in rep.evidence["facts"]
    assert rep.evidence["positive_fibre_dimension"].startswith("heuristic")
    assert {e.theorem for e in rep.implied_by} >= {"radial-homogeneous", "fibre-dimension-mvf"}


def test_mvf_vacuous_when_milnor_set_is_inside_the_preimage(xy_z2, cfg):
    empty = WitnessSet.empty(3, diagnostics={"converged": 40})
    rep = check_mvf_exists(xy_z2, [empty], None, cfg)
    assert rep.verdict == "pass"
    assert rep.evidence["facts"] == ["fact:milnor-set-empty"]


# -- reports and implications ---------------------------------------------------

def test_report_validation_and_json():
    with pytest.raises(ValueError):
        ConditionReport("nice", "maybe")
    with pytest.raises(ValueError):
        ConditionReport("unknown", "pass")
    rep = ConditionReport("nice", "pass", {"a": np.array([1.0, np.nan]), "b": np.float64(np.inf),
                                           "c": np.int64(3)}, [Implication("t", ("weights:radial",))], {}, 0)
    data = json.loads(rep.dumps())
    assert data["evidence"] == {"a": [1.0, "nan"], "b": "inf", "c": 3}
    assert dumps(rep) == dumps(rep) and dumps(rep).endswith("\n")


def test_implication_problems():
    nice = ConditionReport("nice", "pass")
    cm = ConditionReport("cond_main", "inconclusive")
    tube = ConditionReport("tube_exists", "pass", implied_by=[Implication("cond-main-tube", ("nice", "cond_main"))])
    assert implication_problems([nice, cm, tube], set()) == [
        "tube_exists <- cond-main-tube: unmet ['cond_main']"]
    cm.verdict = "pass"
    assert implication_problems([nice, cm, tube], set()) == []
    # one failing report for a condition withdraws it
    assert implication_problems([nice, cm, ConditionReport("cond_main", "fail"), tube], set())


def test_implication_cycles_are_reported():
    a = ConditionReport("tube_exists", "pass", implied_by=[Implication("x", ("sphere_exists",))])
    b = ConditionReport("sphere_exists", "pass", implied_by=[Implication("y", ("tube_exists",))])
    problems = implication_problems([a, b], set())
    assert any("cycle" in p for p in problems)
