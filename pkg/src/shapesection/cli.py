"""Command-line interface.

Subcommands ``extract``, ``pipeline``, ``gridsearch`` and ``classify``. Every
command is a pure function of its configuration and input files, so two runs
write byte-identical outputs. Exit codes: 0 success, 1 input or validation
failure, 2 numerical or degenerate failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, ingest, learn, metric
from .config import RunConfig, load_config
from .errors import ConfigError, InputError, NumericalError, ShapeSectionError
from .normalize import apply_plan
from .reparam import curvature_clock_resample


EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2
DIGITS = 10


def fmt(v: float) -> str:
    """Number with :data:`DIGITS` significant digits (``inf``/``nan`` spelled out)."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.{DIGITS}g}"


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_INPUT


def _manifest(cfg: RunConfig) -> Path:
    if cfg.manifest is None:
        raise ConfigError("paths.manifest: no manifest given (config key or positional argument)")
    return Path(cfg.manifest)


def _mirror_name(path: str, root: Path) -> Path:
    """Output name for ``path``: its location under ``root`` with a ``.csv`` suffix."""
    p = Path(path)
    try:
        rel = p.resolve().relative_to(root.resolve())
    except ValueError:
        rel = Path(p.name)
    return rel.with_suffix(".csv")


def _root(cfg: RunConfig) -> Path:
    return Path(cfg.input_root) if cfg.input_root is not None else _manifest(cfg).parent


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def cmd_extract(cfg: RunConfig) -> int:
    """Trace or read every manifest entry and write one contour CSV each.

    Failures are reported per file; the remaining files are still processed.
    """
    rows = ingest.read_manifest(_manifest(cfg))
    root = _root(cfg)
    out_dir = Path(cfg.out) / "contours"
    failures = set()
    for path, _, _ in rows:
        name = _mirror_name(path, root)
        try:
            c = ingest.load_contour(path, cfg.threshold)
        except (ShapeSectionError, OSError) as exc:
            failures.add(exit_code(exc))
            print(f"error: {path}: {exc}", file=sys.stderr)
            continue
        target = out_dir / name
        target.parent.mkdir(parents=True, exist_ok=True)
        ingest.write_contour_csv(c, target)
        print(f"{name.as_posix()}: {c.shape[0]} vertices")
    # validation failures outrank numerical ones
    return min(failures) if failures else EXIT_OK


def _load(cfg: RunConfig):
    data = ingest.load_dataset(_manifest(cfg), cfg.threshold)
    if len(data) == 0:
        raise InputError("manifest lists no files")
    root = _root(cfg)
    data.names = [_mirror_name(p, root).as_posix() for p in data.names]
    return data


def _normalize(data, cfg: RunConfig) -> list:
    out = []
    for name, c in zip(data.names, data.contours):
        try:
            out.append(apply_plan(c, cfg.plan))
        except ShapeSectionError as exc:
            raise type(exc)(f"{name}: {exc}") from exc
    return out


def _canonical(data, cfg: RunConfig) -> np.ndarray:
    normalized = _normalize(data, cfg)
    out = np.empty((len(normalized), cfg.family.samples, 2))
    for i, (name, c) in enumerate(zip(data.names, normalized)):
        try:
            out[i] = curvature_clock_resample(c, cfg.family, smooth=cfg.smooth)
        except ShapeSectionError as exc:
            raise type(exc)(f"{name}: {exc}") from exc
    return out


def _family_line(cfg: RunConfig) -> str:
    f = cfg.family
    return f"family: lambda={fmt(f.lam)} sectors={f.sectors} samples={f.samples} smooth={fmt(cfg.smooth)}"


def _plan_line(cfg: RunConfig) -> str:
    p = cfg.plan
    return f"plan: direction={p.direction} start={p.start} scale={p.scale} translate={p.translate} rotate={p.rotate}"


def _contour_csv(c) -> str:
    return "x,y\n" + "".join(f"{fmt(x)},{fmt(y)}\n" for x, y in c)


def cmd_pipeline(cfg: RunConfig) -> int:
    """Normalize, resample, and score one dataset in a single pass."""
    data = _load(cfg)
    if cfg.subset == "train":
        data, _ = learn.split_dataset(data, cfg.split)
    x = _canonical(data, cfg)
    out = Path(cfg.out)
    for name, c in zip(data.names, x):
        _write_text(out / "contours" / name, _contour_csv(c))
    dist = metric.distance_matrix(x)
    lines = ["path," + ",".join(data.names)]
    lines += [name + "," + ",".join(fmt(v) for v in row) for name, row in zip(data.names, dist)]
    _write_text(out / "distmat.csv", "\n".join(lines) + "\n")
    rep = metric.dunn_report(x, data.labels, dist)
    a, b = rep.closest_pair
    dunn_line = (
        f"dunn={fmt(rep.index)} min_inter={fmt(rep.min_inter)} max_intra={fmt(rep.max_intra)} "
        f"closest_pair={a},{b} widest_class={rep.widest_class}"
    )
    _write_text(out / "dunn.txt", dunn_line + "\n")
    report = [
        _plan_line(cfg),
        _family_line(cfg),
        f"subset: {cfg.subset} contours={len(data)} classes={data.class_count}",
        dunn_line,
    ]
    _write_text(out / "report.txt", "\n".join(report) + "\n")
    print(dunn_line)
    return EXIT_OK


def _workers(cfg: RunConfig) -> int:
    if cfg.threads == 0:
        return os.cpu_count() or 1
    return cfg.threads


def grid_csv(result: learn.GridResult) -> str:
    """Table with one row per sector count and one column per lambda."""
    lines = ["n," + ",".join(fmt(lam) for lam in result.lambdas)]
    for n, row in zip(result.sector_counts, result.table):
        lines.append(f"{n}," + ",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def cmd_gridsearch(cfg: RunConfig) -> int:
    data = _load(cfg)
    train, _ = learn.split_dataset(data, cfg.split)
    try:
        result = learn.grid_search(train, cfg.plan, cfg.grid, _workers(cfg), cfg.smooth)
    except ShapeSectionError as exc:
        raise type(exc)(f"normalization: {exc}") from exc
    out = Path(cfg.out)
    _write_text(out / "grid.csv", grid_csv(result))
    n, lam, value = result.best
    best = f"best: n={n} lambda={fmt(lam)} dunn={fmt(value)}"
    report = [_plan_line(cfg), f"training contours={len(train)} classes={train.class_count}", best]
    report += [f"failed: n={k[0]} lambda={fmt(k[1])}: {msg}" for k, msg in sorted(result.errors.items())]
    _write_text(out / "report.txt", "\n".join(report) + "\n")
    print(best)
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    data = _load(cfg)
    train, test = learn.split_dataset(data, cfg.split)
    if len(test) == 0:
        raise InputError("test split is empty; lower split.train_per_class")
    train_x = _canonical(train, cfg)
    test_x = _canonical(test, cfg)
    spec = cfg.classify
    knn = learn.knn_classify(train_x, train.labels, test_x, spec.k)
    model = learn.logistic_train(train_x, train.labels, spec.penalty, spec.iters, n_classes=data.class_count)
    logit = model.predict(test_x)
    acc_knn = learn.accuracy(test.labels, knn)
    acc_log = learn.accuracy(test.labels, logit)
    pred = knn if spec.predictions == "knn" else logit
    rows = ["path,true,pred"] + [f"{n},{t},{p}" for n, t, p in zip(test.names, test.labels, pred)]
    out = Path(cfg.out)
    _write_text(out / "predictions.csv", "\n".join(rows) + "\n")
    lines = [f"knn_accuracy={fmt(acc_knn)} k={spec.k}", f"logistic_accuracy={fmt(acc_log)} penalty={fmt(spec.penalty)}"]
    report = [
        _plan_line(cfg),
        _family_line(cfg),
        f"train={len(train)} test={len(test)} classes={data.class_count}",
        f"predictions: {spec.predictions}",
        *lines,
    ]
    _write_text(out / "report.txt", "\n".join(report) + "\n")
    print("\n".join(lines))
    return EXIT_OK


COMMANDS = {
    "extract": cmd_extract,
    "pipeline": cmd_pipeline,
    "gridsearch": cmd_gridsearch,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="key = value config file")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="output directory")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes (0 = auto)")
    common.add_argument("--threshold", type=int, default=argparse.SUPPRESS, help="binarization level (0-255)")
    parser = argparse.ArgumentParser(
        prog="shapesection", description="Canonical contour parameterizations and shape distances.", parents=[common]
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "extract": "trace or read contours listed in a manifest",
        "pipeline": "normalize, resample, distance matrix and Dunn index",
        "gridsearch": "Dunn index over a (sectors, lambda) grid",
        "classify": "KNN and logistic regression on the train/test split",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, parents=[common])
        p.add_argument("manifest", nargs="?", type=Path, help="manifest CSV (overrides paths.manifest)")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) is not None else RunConfig()
    overrides = {}
    if getattr(args, "manifest", None) is not None:
        overrides["manifest"] = args.manifest
    if getattr(args, "out", None) is not None:
        overrides["out"] = args.out
    if getattr(args, "threads", None) is not None:
        if args.threads < 0:
            raise ConfigError("--threads: must be >= 0")
        overrides["threads"] = args.threads
    if getattr(args, "threshold", None) is not None:
        if not 0 <= args.threshold <= 255:
            raise ConfigError("--threshold: must be in [0, 255]")
        overrides["threshold"] = args.threshold
    return replace(cfg, **overrides)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (ShapeSectionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
