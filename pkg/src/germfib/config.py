"""Single table of tolerances, scales and seeds.

Config files are ``key = value`` lines; ``#`` starts a comment.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class Config:
    # numerical tolerances
    tol_variety: float = 1e-10
    tol_zero: float = 1e-9
    rank_gap: float = 1e-8
    angular_tol: float = 1e-2
    disc_bin_tol: float = 1e-3
    # sampling
    r0: float = 0.5
    rungs: int = 4
    n_witness: int = 400
    link_scale: float = 0.4
    min_witnesses: int = 8
    weight_bound: int = 12
    cond_main_ratio: float = 0.05
    # fibrations and flow
    eps: float = 0.5
    eta: float | None = None
    n_blow: int = 50
    drift_tol: float = 1e-6
    drift_budget: float = 1e-7
    fiber_residual_tol: float = 1e-6
    max_steps: int = 20000
    n_coverage: int = 8
    seed: int = 0

    @property
    def ladder(self) -> tuple[float, ...]:
        return tuple(self.r0 / 2 ** k for k in range(self.rungs))

    @property
    def eta_value(self) -> float:
        return self.eta if self.eta is not None else self.eps / 100

    def tolerances(self) -> dict:
        return {k: v for k, v in asdict(self).items() if k != "seed"}

    def with_overrides(self, **kw) -> Config:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _coerce(name: str, text: str):
    kinds = {f.name: f.type for f in fields(Config)}
    if name not in kinds:
        raise ValueError(f"unknown config key {name!r}")
    kind = kinds[name]
    text = text.strip()
    if "int" in kind and "float" not in kind:
        return int(text)
    if text.lower() in ("none", ""):
        return None
    return float(text)


def parse_config(text: str, base: Config | None = None) -> Config:
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",), interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string("[config]\n" + text)
    except configparser.ParsingError as e:
        lineno, line = e.errors[0]
        raise ValueError(f"config line {lineno - 1}: expected 'key = value', got {line}") from None
    except configparser.DuplicateOptionError as e:
        raise ValueError(f"config line {e.lineno - 1}: duplicate key {e.option!r}") from None
    except configparser.Error as e:
        raise ValueError(f"bad config file: {e.message}") from None
    values = {key: _coerce(key, value) for key, value in parser["config"].items()}
    return replace(base or Config(), **values)


def load_config(path=None, base: Config | None = None) -> Config:
    """Read a config file (if given); ``GERMFIB_SEED`` supplies the seed fallback."""
    cfg = base or Config()
    env_seed = os.environ.get("GERMFIB_SEED")
    if env_seed is not None:
        cfg = replace(cfg, seed=int(env_seed))
    if path is not None:
        cfg = parse_config(Path(path).read_text(), cfg)
    return cfg
