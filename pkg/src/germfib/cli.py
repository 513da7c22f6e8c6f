"""Command-line interface: ``germfib <command> ...``.

Exit codes: 0 completed (whatever the verdicts), 2 input error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from .analysis import InvariantViolation, analyze, equivalence_directions
from .catalog import CATALOG, catalog_germ, listing
from .conditions import (check_condition_main, check_milnor_image_coverage, check_mvf_exists,
                         check_niceness, check_radial_discriminant, check_rho_regularity_psi,
                         milnor_witnesses, sample_discriminant)
from .config import Config, load_config
from .flow import FlowOptions, UnsupportedFormat, points_to_ply, run_equivalence, sample_fiber
from .germ import GermError, MapGerm, load_germ
from .homogeneity import detect_polar_weights, detect_radial_weights
from .parse import ParseError
from .report import dumps

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3


class InputError(Exception):
    pass


def resolve_germ(spec: str) -> MapGerm:
    """A germ file path, or the name of a catalog germ."""
    path = Path(spec)
    if path.is_file():
        return load_germ(path)
    if spec in CATALOG:
        return catalog_germ(spec)
    raise InputError(f"{spec!r} is neither a germ file nor a catalog name")


def _parse_y(text: str) -> np.ndarray:
    try:
        y = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise InputError(f"cannot parse direction {text!r}; use comma-separated numbers") from None
    n = np.linalg.norm(y)
    if n == 0:
        raise InputError("direction must be nonzero")
    return y / n


def _config(args) -> Config:
    cfg = load_config(getattr(args, "config", None))
    over = {k: getattr(args, k, None) for k in ("eps", "eta", "seed", "rungs", "n_witness", "n_blow")}
    return cfg.with_overrides(**over)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--eps", type=float, help="sphere radius")
    p.add_argument("--eta", type=float, help="tube radius (default eps/100)")
    p.add_argument("--seed", type=int, help="random seed (fallback: GERMFIB_SEED)")
    p.add_argument("--rungs", type=int, help="number of radius-ladder rungs")
    p.add_argument("--n-witness", dest="n_witness", type=int, help="seeds per witness sample")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="germfib", description="tube and sphere fibration analysis of real map germs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run every check and write a report bundle")
    p.add_argument("germ", help="germ file or catalog name")
    _common(p)
    p.add_argument("--n-blow", dest="n_blow", type=int, help="trajectories per target direction")
    p.add_argument("--out", help="bundle directory (default: bundle_<label>)")
    p.add_argument("--scale-sweep", action="store_true", help="repeat the flow at eps/2")

    p = sub.add_parser("check", help="run one condition check and print its report")
    p.add_argument("condition", choices=["nice", "radial_disc", "cond_main", "rho_regular_psi",
                                         "mvf_exists", "milnor_image_coverage"])
    p.add_argument("germ")
    _common(p)

    p = sub.add_parser("weights", help="detect radial and polar weights")
    p.add_argument("germ")
    p.add_argument("--bound", type=int, default=12)

    p = sub.add_parser("fiber", help="sample a tube or sphere fibre")
    p.add_argument("germ")
    p.add_argument("--kind", choices=["tube", "sphere"], required=True)
    p.add_argument("--y", required=True, help="target direction, e.g. 0.6,0.8")
    p.add_argument("-n", type=int, default=50)
    p.add_argument("--format", choices=["csv", "ply"], default="csv")
    p.add_argument("--out", help="output file (default: stdout)")
    _common(p)

    p = sub.add_parser("blowaway", help="flow tube-fibre points to the sphere and report")
    p.add_argument("germ")
    p.add_argument("--y", help="target direction; default: one per component")
    p.add_argument("-n", type=int, default=50)
    p.add_argument("--out", help="directory for trajectory CSVs")
    _common(p)

    sub.add_parser("catalog", help="list built-in germs")

    p = sub.add_parser("export", help="convert bundle geometry to CSV or PLY")
    p.add_argument("bundle", help="bundle directory written by analyze")
    p.add_argument("--what", choices=["fibers", "trajectories", "milnor_set"], required=True)
    p.add_argument("--format", choices=["csv", "ply"], default="csv")
    p.add_argument("--out", required=True, help="output directory")
    return ap


def _read_points(path: Path) -> tuple[list[str], np.ndarray]:
    rows = list(csv.reader(io.StringIO(path.read_text())))
    header = rows[0]
    cols = [i for i, h in enumerate(header) if h.startswith("x") and h[1:].isdigit()]
    pts = np.array([[float(r[i]) for i in cols] for r in rows[1:]]).reshape(-1, len(cols))
    return header, pts


def cmd_export(bundle: Path, what: str, fmt: str, out: Path) -> list[Path]:
    sub = {"fibers": "fibers", "trajectories": "trajectories", "milnor_set": "witnesses"}[what]
    if not (bundle / "report.json").is_file():
        raise InputError(f"{bundle} is not a bundle directory")
    src = bundle / sub
    files = sorted(src.glob("*.csv")) if src.is_dir() else []
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for f in files:
        if fmt == "csv":
            target = out / f.name
            target.write_text(f.read_text())
        else:
            _, pts = _read_points(f)
            target = out / (f.stem + ".ply")
            points_to_ply(pts, target)
        written.append(target)
    return written


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ParseError, GermError, InputError, UnsupportedFormat, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT


def _dispatch(args) -> int:
    if args.command == "catalog":
        sys.stdout.write(listing())
        return EXIT_OK
    if args.command == "export":
        for path in cmd_export(Path(args.bundle), args.what, args.format, Path(args.out)):
            print(path)
        return EXIT_OK

    g = resolve_germ(args.germ)
    if args.command == "weights":
        rw = detect_radial_weights(g, args.bound)
        pw = detect_polar_weights(g, args.bound) if g.provenance is not None else None
        sys.stdout.write(dumps({"radial": rw, "polar": pw}))
        return EXIT_OK

    cfg = _config(args)
    if args.command == "analyze":
        bundle = analyze(g, cfg, scale_sweep=args.scale_sweep)
        out = Path(args.out or f"bundle_{g.label or 'germ'}")
        bundle.write(out)
        for r in bundle.reports:
            print(f"{r.condition:24s} {r.verdict}")
        print(f"bundle written to {out}")
        return EXIT_OK
    if args.command == "check":
        sys.stdout.write(dumps(_check(args.condition, g, cfg)))
        return EXIT_OK
    if args.command == "fiber":
        ds = sample_discriminant(g, cfg=cfg)
        fs = sample_fiber(g, args.kind, _parse_y(args.y), cfg.eps, cfg.eta_value, args.n, cfg.seed,
                          disc_rays=ds.directions if ds.rays else None, angular_tol=cfg.angular_tol)
        text = fs.to_ply() if args.format == "ply" else fs.to_csv()
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.command == "blowaway":
        ds = sample_discriminant(g, cfg=cfg)
        ys = [_parse_y(args.y)] if args.y else equivalence_directions(g, ds, cfg)
        flow = FlowOptions(drift_budget=cfg.drift_budget, max_steps=cfg.max_steps, tol_zero=cfg.tol_zero)
        reports = []
        for k, y in enumerate(ys):
            run = run_equivalence(g, y, cfg.eps, cfg.eta_value, args.n, cfg.seed,
                                  disc_rays=ds.directions if ds.rays else None,
                                  angular_tol=cfg.angular_tol, drift_tol=cfg.drift_tol,
                                  residual_tol=cfg.fiber_residual_tol, flow=flow)
            reports.append(run.report)
            if args.out:
                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                for i, tr in enumerate(run.trajectories):
                    tr.to_csv(out / f"c{k}_{i:03d}.csv")
        sys.stdout.write(dumps(reports))
        return EXIT_OK
    raise InputError(f"unknown command {args.command}")


def _check(condition: str, g: MapGerm, cfg: Config):
    if condition == "nice":
        return check_niceness(g, cfg)
    ds = sample_discriminant(g, cfg=cfg)
    if condition == "radial_disc":
        return check_radial_discriminant(ds, cfg)
    if condition == "rho_regular_psi":
        return check_rho_regularity_psi(g, ds=ds, cfg=cfg)
    if condition == "milnor_image_coverage":
        return check_milnor_image_coverage(g, cfg.eta_value, cfg.n_coverage, ds, cfg)
    ws = milnor_witnesses(g, ds, cfg=cfg)
    if condition == "cond_main":
        return check_condition_main(g, ds=ds, cfg=cfg, witnesses=ws)
    return check_mvf_exists(g, ws, ds, cfg)


if __name__ == "__main__":
    sys.exit(main())
