"""Learning the section: Dunn-index grid search and two small classifiers."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import metric
from .errors import DivergenceError, InputError, NumericalError, ShapeSectionError
from .metric import LabeledDataset
from .normalize import SELECTED_PLAN, NormalizationPlan, apply_plan, reverse_direction
from .reparam import DEFAULT_SMOOTH, ParamFamily, curvature_clock_resample, reference_point

log = logging.getLogger(__name__)

TABLE_LAMBDAS = (0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1000.0, 2000.0, math.inf)
TABLE_SECTORS = (0, 2, 3, 4, 5, 7, 9, 10, 20)


@dataclass(frozen=True)
class GridSpec:
    lambdas: tuple[float, ...] = TABLE_LAMBDAS
    sector_counts: tuple[int, ...] = TABLE_SECTORS
    samples: int = 1000

    def __post_init__(self):
        if not self.lambdas or not self.sector_counts:
            raise InputError("grid needs at least one lambda and one sector count")
        for lam in self.lambdas:
            for n in self.sector_counts:
                ParamFamily(lam, n, self.samples)


@dataclass
class GridResult:
    """Dunn values with rows indexed by sector count and columns by lambda.

    Failed cells hold NaN and their error message in ``errors``.
    """

    lambdas: tuple[float, ...]
    sector_counts: tuple[int, ...]
    table: NDArray[np.float64]
    errors: dict[tuple[int, float], str] = field(default_factory=dict)

    @property
    def best(self) -> tuple[int, float, float]:
        """(sector count, lambda, Dunn) of the best cell; ties go to larger lambda, then fewer sectors."""
        best = None
        for i, n in enumerate(self.sector_counts):
            for j, lam in enumerate(self.lambdas):
                v = self.table[i, j]
                if not np.isfinite(v):
                    continue
                key = (v, lam, -n)
                if best is None or key > best[0]:
                    best = (key, n, lam, float(v))
        if best is None:
            raise NumericalError("every grid cell failed")
        return best[1], best[2], best[3]


@dataclass(frozen=True)
class SplitSpec:
    train_per_class: int = 50


def split_dataset(data: LabeledDataset, spec: SplitSpec = SplitSpec()) -> tuple[LabeledDataset, LabeledDataset]:
    """First ``train_per_class`` members of each class (in dataset order) train, the rest test."""
    train, test = [], []
    for k in range(data.class_count):
        idx = np.flatnonzero(data.labels == k)
        train.extend(idx[: spec.train_per_class])
        test.extend(idx[spec.train_per_class :])
    return data.subset(np.sort(train)), data.subset(np.sort(test))


def normalize_all(contours, plan: NormalizationPlan = SELECTED_PLAN) -> list[NDArray[np.float64]]:
    return [apply_plan(c, plan) for c in contours]


def canonicalize(
    contours, fam: ParamFamily, refs: list | None = None, smooth: float = DEFAULT_SMOOTH
) -> NDArray[np.float64]:
    """Stack of contours resampled under ``fam``; ``refs`` are clock reference points."""
    out = np.empty((len(contours), fam.samples, 2))
    for i, c in enumerate(contours):
        ref = None if refs is None else refs[i]
        out[i] = curvature_clock_resample(c, fam, ref, smooth=smooth)
    return out


def _grid_cell(args):
    normalized, labels, refs, lam, n, samples, smooth = args
    try:
        x = canonicalize(normalized, ParamFamily(lam, n, samples), refs, smooth)
        return metric.dunn_index(x, labels), None
    except ShapeSectionError as exc:
        return math.nan, f"{type(exc).__name__}: {exc}"


def grid_search(
    raw: LabeledDataset,
    plan: NormalizationPlan = SELECTED_PLAN,
    grid: GridSpec = GridSpec(),
    workers: int = 1,
    smooth: float = DEFAULT_SMOOTH,
) -> GridResult:
    """Dunn index of ``raw`` for every (sector count, lambda) cell of ``grid``.

    Normalization and reference points are computed once; each cell then
    only resamples and scores. Results do not depend on ``workers``.
    """
    normalized = normalize_all(raw.contours, plan)
    refs = [reference_point(c) for c in normalized] if any(n > 0 for n in grid.sector_counts) else None
    cells = [(n, lam) for n in grid.sector_counts for lam in grid.lambdas]
    jobs = [(normalized, raw.labels, refs, lam, n, grid.samples, smooth) for n, lam in cells]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_grid_cell, jobs))
    else:
        results = [_grid_cell(j) for j in jobs]
    table = np.full((len(grid.sector_counts), len(grid.lambdas)), np.nan)
    errors = {}
    for (n, lam), (value, err) in zip(cells, results):
        i, j = grid.sector_counts.index(n), grid.lambdas.index(lam)
        table[i, j] = value
        if err is not None:
            errors[(n, lam)] = err
            log.warning("grid cell n=%s lambda=%s failed: %s", n, lam, err)
    return GridResult(tuple(grid.lambdas), tuple(grid.sector_counts), table, errors)


def _flatten(x) -> NDArray[np.float64]:
    x = np.asarray(x, dtype=np.float64)
    return x.reshape(x.shape[0], -1)


def knn_classify(
    train_x: ArrayLike, train_y: ArrayLike, test_x: ArrayLike, k: int = 5
) -> NDArray[np.int64]:
    """Majority vote among the ``k`` nearest training contours under the L2 distance.

    Vote ties go to the class whose tied neighbours are closer on average,
    then to the smaller class id.
    """
    a = _flatten(train_x)
    b = _flatten(test_x)
    y = np.asarray(train_y, dtype=np.int64)
    if not 1 <= k <= a.shape[0]:
        raise InputError(f"k must be in [1, {a.shape[0]}], got {k}")
    npts = np.asarray(train_x).shape[1] if np.asarray(train_x).ndim == 3 else a.shape[1]
    # squared distances without forming the (test, train, D) difference tensor
    d2 = (b * b).sum(1)[:, None] + (a * a).sum(1)[None, :] - 2.0 * b @ a.T
    d = np.sqrt(np.maximum(d2, 0.0) / npts)
    pred = np.empty(b.shape[0], dtype=np.int64)
    for i in range(b.shape[0]):
        nn = np.argsort(d[i], kind="stable")[:k]
        classes, counts = np.unique(y[nn], return_counts=True)
        tied = classes[counts == counts.max()]
        if tied.size == 1:
            pred[i] = tied[0]
            continue
        means = [d[i, nn][y[nn] == t].mean() for t in tied]
        pred[i] = tied[int(np.argmin(means))]
    return pred


@dataclass
class LogisticModel:
    weights: NDArray[np.float64]  # (D, K)
    bias: NDArray[np.float64]  # (K,)
    losses: list[float] = field(default_factory=list)

    def decision(self, x: ArrayLike) -> NDArray[np.float64]:
        return _flatten(x) @ self.weights + self.bias

    def predict_proba(self, x: ArrayLike) -> NDArray[np.float64]:
        return _softmax(self.decision(x))

    def predict(self, x: ArrayLike) -> NDArray[np.int64]:
        return np.argmax(self.decision(x), axis=1)


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def logistic_loss_grad(
    w: NDArray[np.float64], b: NDArray[np.float64], x: NDArray[np.float64], onehot: NDArray[np.float64], penalty: float
) -> tuple[float, NDArray[np.float64], NDArray[np.float64]]:
    """Summed cross-entropy plus ``penalty / 2 * |W|^2`` (bias unpenalized), and its gradient."""
    z = x @ w + b
    zmax = z.max(axis=1, keepdims=True)
    logsum = np.log(np.exp(z - zmax).sum(axis=1, keepdims=True)) + zmax
    loss = float(-(onehot * (z - logsum)).sum() + 0.5 * penalty * np.sum(w * w))
    r = np.exp(z - logsum) - onehot
    return loss, x.T @ r + penalty * w, r.sum(axis=0)


def logistic_train(
    train_x: ArrayLike,
    train_y: ArrayLike,
    l2_penalty: float = 1.0,
    iters: int = 500,
    step: float | None = None,
    n_classes: int | None = None,
) -> LogisticModel:
    """Multinomial logistic regression by full-batch gradient descent from zero.

    Each iteration backtracks (halving the step) until the loss does not
    increase, then lets the step grow again. ``step`` is the initial step size;
    by default it is the inverse of a Lipschitz bound of the gradient.
    """
    x = _flatten(train_x)
    y = np.asarray(train_y, dtype=np.int64)
    k = int(n_classes if n_classes is not None else y.max() + 1)
    onehot = np.zeros((x.shape[0], k))
    onehot[np.arange(x.shape[0]), y] = 1.0
    w = np.zeros((x.shape[1], k))
    b = np.zeros(k)
    if step is None:
        # softmax Hessian is bounded by 1/2 * X^T X (+ penalty)
        lip = 0.5 * (np.linalg.norm(x, 2) ** 2 + x.shape[0]) + l2_penalty
        step = 1.0 / lip
    loss, gw, gb = logistic_loss_grad(w, b, x, onehot, l2_penalty)
    losses = [loss]
    for _ in range(iters):
        gnorm2 = float(np.sum(gw * gw) + np.sum(gb * gb))
        if gnorm2 == 0.0:
            break
        while True:
            w_new = w - step * gw
            b_new = b - step * gb
            new_loss, new_gw, new_gb = logistic_loss_grad(w_new, b_new, x, onehot, l2_penalty)
            if not np.isfinite(new_loss) and step < 1e-300:
                raise DivergenceError("logistic loss is not finite")
            if np.isfinite(new_loss) and new_loss <= loss - 0.5 * step * gnorm2:
                break
            step *= 0.5
            if step < 1e-300:
                raise DivergenceError("step size underflow in logistic regression")
        w, b, loss, gw, gb = w_new, b_new, new_loss, new_gw, new_gb
        losses.append(loss)
        step *= 2.0
    if not np.isfinite(loss):
        raise DivergenceError("logistic loss is not finite")
    return LogisticModel(w, b, losses)


def accuracy(truth: ArrayLike, pred: ArrayLike) -> float:
    t = np.asarray(truth)
    p = np.asarray(pred)
    if t.shape != p.shape:
        raise InputError(f"label vectors differ in length: {t.shape} vs {p.shape}")
    if t.size == 0:
        raise InputError("no labels to score")
    return float(np.mean(t == p))


# Cumulative preprocessing ladder, each rung adding one standardization step.
LADDER = (
    ("training set", NormalizationPlan("none", "none", "none", "none", "none")),
    ("direction", NormalizationPlan("ccw", "none", "none", "none", "none")),
    ("start point", NormalizationPlan("ccw", "max_y", "none", "none", "none")),
    ("unit length", NormalizationPlan("ccw", "max_y", "unit_length", "none", "none")),
    ("unit area", NormalizationPlan("ccw", "max_y", "unit_area", "none", "none")),
    ("start origin", NormalizationPlan("ccw", "max_y", "unit_length", "start_origin", "none")),
    ("contour centroid", NormalizationPlan("ccw", "max_y", "unit_length", "contour_centroid", "none")),
    ("area centroid", NormalizationPlan("ccw", "max_y", "unit_length", "area_centroid", "none")),
    ("ellipse axes", NormalizationPlan("ccw", "max_y", "unit_length", "area_centroid", "ellipse_axes")),
    ("tip vertical", SELECTED_PLAN),
)


def random_directions(contours, seed: int = 0) -> list[NDArray[np.float64]]:
    """Reverse a random half of the contours (deterministic given ``seed``)."""
    rng = np.random.default_rng(seed)
    flip = np.zeros(len(contours), dtype=bool)
    flip[rng.permutation(len(contours))[: len(contours) // 2]] = True
    return [reverse_direction(c) if f else c for c, f in zip(contours, flip)]


def preprocessing_ladder(
    raw: LabeledDataset, samples: int = 1000, seed: int = 0
) -> dict[str, float]:
    """Dunn index under arc-length sampling after each rung of :data:`LADDER`.

    Also reports ``"random direction"``: the raw contours with a random half
    traveled backwards and the rest forced counterclockwise.
    """
    fam = ParamFamily(math.inf, 0, samples)
    out = {}
    ccw = normalize_all(raw.contours, LADDER[1][1])
    mixed = random_directions(ccw, seed)
    out["random direction"] = metric.dunn_index(canonicalize(mixed, fam), raw.labels)
    for name, plan in LADDER:
        x = canonicalize(normalize_all(raw.contours, plan), fam)
        out[name] = metric.dunn_index(x, raw.labels)
    return out
