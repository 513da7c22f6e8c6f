import json

import pytest

from germfib import Config, analyze, catalog_germ, load_config
from germfib import cli
from germfib.analysis import InvariantViolation
from germfib.config import parse_config

LIGHT = ["--n-witness", "60", "--rungs", "2"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    assert "xy_z2" in out and "R^3 -> R^2" in out


def test_weights_command(capsys):
    code, out, _ = run(capsys, "weights", "polar_z1z2bar")
    assert code == 0
    data = json.loads(out)
    assert data["polar"] == {"p": [2, 1], "k": 1}
    assert data["radial"]["d"] == 2


def test_check_command(capsys):
    code, out, _ = run(capsys, "check", "radial_disc", "xy_z2", *LIGHT)
    assert code == 0
    rep = json.loads(out)
    assert rep["condition"] == "radial_disc" and rep["verdict"] == "pass"
    assert rep["tolerances"]["angular_tol"] == 0.01


def test_fiber_command(capsys, tmp_path):
    code, out, _ = run(capsys, "fiber", "xy_z2", "--kind", "sphere", "--y", "3,4", "-n", "5", *LIGHT)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x1,x2,x3,residual" and len(lines) == 6
    target = tmp_path / "t.ply"
    code, _, _ = run(capsys, "fiber", "xy_z2", "--kind", "tube", "--y", "0.6,0.8", "-n", "5",
                     "--format", "ply", "--out", str(target), *LIGHT)
    assert code == 0
    assert target.read_text().startswith("ply\n")


def test_input_errors_exit_2(capsys):
    assert run(capsys, "check", "nice", "no_such_germ")[0] == 2
    assert run(capsys, "fiber", "xy_z2", "--kind", "tube", "--y", "1,0", *LIGHT)[0] == 2
    assert run(capsys, "fiber", "xy_z2", "--kind", "tube", "--y", "a,b")[0] == 2
    code, _, err = run(capsys, "fiber", "ex31_n4", "--kind", "tube", "--y", "0.6,0.8", "--format", "ply",
                       "-n", "2", *LIGHT)
    assert code == 2 and "m = 4" in err


def test_bad_germ_file_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.gm"
    path.write_text("vars: x y\nG1 = x +\n")
    code, _, err = run(capsys, "weights", str(path))
    assert code == 2
    assert "line 2" in err


def test_invariant_violation_exit_3(capsys, monkeypatch):
    def broken(*args, **kwargs):
        raise InvariantViolation("tube_exists <- cond-main-tube: unmet ['cond_main']")

    monkeypatch.setattr(cli, "analyze", broken)
    code, _, err = run(capsys, "analyze", "xy_z2")
    assert code == 3
    assert "invariant violation" in err


def test_analyze_and_export(capsys, tmp_path):
    out = tmp_path / "bundle"
    code, text, _ = run(capsys, "analyze", "product_xy_t", "--out", str(out), "--n-blow", "4", *LIGHT)
    assert code == 0
    assert "equivalence_evidence" in text
    report = json.loads((out / "report.json").read_text())
    assert report["germ"]["label"] == "product_xy_t"
    assert report["config"]["n_witness"] == 60
    assert {r["condition"] for r in report["reports"]} >= {"nice", "cond_main", "tube_exists", "sphere_exists"}
    for rel in report["artifacts"]:
        assert (out / rel).is_file()
    code, text, _ = run(capsys, "export", str(out), "--what", "trajectories", "--format", "ply",
                        "--out", str(tmp_path / "ply"))
    assert code == 0
    files = text.split()
    assert files and all(f.endswith(".ply") for f in files)
    assert run(capsys, "export", str(tmp_path), "--what", "fibers", "--out", str(tmp_path / "x"))[0] == 2


def test_blowaway_command(capsys, tmp_path):
    code, out, _ = run(capsys, "blowaway", "xy_z2", "--y", "0.6,0.8", "-n", "3", "--out", str(tmp_path), *LIGHT)
    assert code == 0
    (rep,) = json.loads(out)
    assert rep["verdict"] == "pass"
    assert len(list(tmp_path.glob("c0_*.csv"))) == 3


def test_config_file_and_overrides(tmp_path, monkeypatch):
    path = tmp_path / "run.cfg"
    path.write_text("# tighter sampling\neps = 0.25\nn_witness = 100  # fewer seeds\neta = none\n")
    monkeypatch.setenv("GERMFIB_SEED", "9")
    cfg = load_config(path)
    assert (cfg.eps, cfg.n_witness, cfg.seed, cfg.eta_value) == (0.25, 100, 9, 0.0025)
    assert cfg.with_overrides(eps=None, seed=1).seed == 1
    path.write_text("seed = 2\n")
    assert load_config(path).seed == 2                  # the file wins over the environment
    with pytest.raises(ValueError, match="unknown config key"):
        parse_config("epsilon = 1")
    with pytest.raises(ValueError, match="line 2"):
        parse_config("eps = 1\nrungs 3\n")


def test_ladder_and_tolerances():
    cfg = Config(r0=1.0, rungs=3)
    assert cfg.ladder == (1.0, 0.5, 0.25)
    assert "seed" not in cfg.tolerances()


def test_non_fibration_germ_is_inconclusive_not_an_error():
    cfg = Config(n_witness=60, rungs=2)
    bundle = analyze(catalog_germ("nonnice_x_xy"), cfg)
    v = bundle.verdicts()
    assert v["tube_exists"] == ["inconclusive"]
    assert "fail" not in {x for vs in v.values() for x in vs}
    assert len(json.loads(bundle.dumps())["reports"]) == len(bundle.reports)


def test_mixed_germs_record_realified_weight_detection():
    cfg = Config(n_witness=60, rungs=2, n_blow=2)
    assert analyze(catalog_germ("polar_z1z2bar"), cfg).weights["radial_detection"] == "realified"
    assert analyze(catalog_germ("ex31_n3"), cfg).weights["radial_detection"] == "real"
