"""Run configuration: a flat ``key = value`` file with dotted keys.

Example::

    # comments start with '#'
    paths.manifest = data/manifest.csv
    plan.rotate = tip_vertical
    family.lambda = inf
    family.sectors = 3
    grid.lambdas = 0.5, 1, 2, inf

Unknown keys and malformed values are rejected with the offending key in
the message. Command-line flags override file values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError, InputError
from .learn import TABLE_LAMBDAS, TABLE_SECTORS, GridSpec, SplitSpec
from .normalize import SELECTED_PLAN, NormalizationPlan
from .reparam import DEFAULT_SAMPLES, DEFAULT_SMOOTH, ParamFamily

SUBSETS = ("train", "all")
CLASSIFIERS = ("knn", "logistic")
# leading words of validation messages that name a config field
FIELD_KEYS = {"family": ("lambda", "sectors", "samples"), "grid": ("lambda", "sectors", "samples")}


@dataclass(frozen=True)
class ClassifySpec:
    k: int = 5
    penalty: float = 1.0
    iters: int = 500
    predictions: str = "knn"


@dataclass(frozen=True)
class RunConfig:
    plan: NormalizationPlan = SELECTED_PLAN
    family: ParamFamily = ParamFamily(math.inf, 0, DEFAULT_SAMPLES)
    smooth: float = DEFAULT_SMOOTH
    grid: GridSpec = GridSpec()
    split: SplitSpec = SplitSpec()
    subset: str = "train"
    classify: ClassifySpec = ClassifySpec()
    manifest: Path | None = None
    input_root: Path | None = None
    out: Path = Path("out")
    threshold: int = 128
    threads: int = 1
    seed: int = 0
    source: Path | None = field(default=None, compare=False)


def _float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from exc


def _int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from exc


def _choice(key: str, text: str, options) -> str:
    if text not in options:
        raise ConfigError(f"{key}: unknown option {text!r}, expected one of {tuple(options)}")
    return text


def _list(key: str, text: str, conv) -> tuple:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise ConfigError(f"{key}: empty list")
    return tuple(conv(key, t) for t in items)


def parse_config_text(text: str) -> dict[str, str]:
    """Raw ``key -> value`` strings; duplicates and malformed lines are errors."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: missing key")
        if key in raw:
            raise ConfigError(f"{key}: set more than once")
        raw[key] = value
    return raw


def build_config(raw: dict[str, str], base: Path | None = None) -> RunConfig:
    """Apply ``raw`` key/value strings over the defaults."""
    cfg = RunConfig()
    plan = {}
    fam = {"lam": cfg.family.lam, "sectors": cfg.family.sectors, "samples": cfg.family.samples}
    grid = {"lambdas": TABLE_LAMBDAS, "sector_counts": TABLE_SECTORS}
    cls = {}
    top = {}

    def path(value):
        p = Path(value)
        return p if p.is_absolute() or base is None else base / p

    for key, value in raw.items():
        section, _, name = key.partition(".")
        if section == "plan" and name in ("direction", "start", "scale", "translate", "rotate"):
            plan[name] = value
        elif key == "family.lambda":
            fam["lam"] = _float(key, value)
        elif key == "family.sectors":
            fam["sectors"] = _int(key, value)
        elif key == "family.samples":
            fam["samples"] = _int(key, value)
        elif key == "family.smooth":
            top["smooth"] = _float(key, value)
            if top["smooth"] < 0:
                raise ConfigError(f"{key}: must be >= 0")
        elif key == "grid.lambdas":
            grid["lambdas"] = _list(key, value, _float)
        elif key == "grid.sectors":
            grid["sector_counts"] = _list(key, value, _int)
        elif key == "split.train_per_class":
            top["split"] = SplitSpec(_int(key, value))
            if top["split"].train_per_class < 1:
                raise ConfigError(f"{key}: must be >= 1")
        elif key == "split.subset":
            top["subset"] = _choice(key, value, SUBSETS)
        elif key == "classify.k":
            cls["k"] = _int(key, value)
        elif key == "classify.penalty":
            cls["penalty"] = _float(key, value)
        elif key == "classify.iters":
            cls["iters"] = _int(key, value)
        elif key == "classify.predictions":
            cls["predictions"] = _choice(key, value, CLASSIFIERS)
        elif key == "paths.manifest":
            top["manifest"] = path(value)
        elif key == "paths.in":
            top["input_root"] = path(value)
        elif key == "paths.out":
            top["out"] = path(value)
        elif key == "threshold":
            top["threshold"] = _int(key, value)
            if not 0 <= top["threshold"] <= 255:
                raise ConfigError(f"{key}: must be in [0, 255]")
        elif key == "threads":
            top["threads"] = _int(key, value)
            if top["threads"] < 0:
                raise ConfigError(f"{key}: must be >= 0")
        elif key == "seed":
            top["seed"] = _int(key, value)
            if top["seed"] < 0:
                raise ConfigError(f"{key}: must be unsigned")
        else:
            raise ConfigError(f"{key}: unknown configuration key")

    def checked(key, ctor, **kwargs):
        try:
            return ctor(**kwargs)
        except InputError as exc:
            msg = str(exc)
            if msg.startswith(f"{key}."):
                raise ConfigError(msg) from exc
            # "sectors must be ..." -> "family.sectors: must be ..."
            head, _, rest = msg.partition(" ")
            if head in FIELD_KEYS.get(key, ()):
                raise ConfigError(f"{key}.{head}: {rest}") from exc
            raise ConfigError(f"{key}: {msg}") from exc

    top["plan"] = checked("plan", NormalizationPlan, **plan)
    top["family"] = checked("family", ParamFamily, **fam)
    top["grid"] = checked("grid", GridSpec, samples=fam["samples"], **grid)
    top["classify"] = checked("classify", ClassifySpec, **cls)
    if top["classify"].k < 1:
        raise ConfigError("classify.k: must be >= 1")
    if top["classify"].iters < 0:
        raise ConfigError("classify.iters: must be >= 0")
    return replace(cfg, **top)


def load_config(path) -> RunConfig:
    """Read a config file; relative paths inside it resolve against its directory."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cfg = build_config(parse_config_text(text), path.parent)
    return replace(cfg, source=path)
