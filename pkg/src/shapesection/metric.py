"""L2 distance between canonically sampled contours, and the Dunn index."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import kernels
from .errors import DegenerateClusteringError, InputError


@dataclass
class LabeledDataset:
    """Contours with one integer class label each.

    Raw contours may differ in vertex count; after canonicalization they all
    share N and :meth:`stacked` gives the (M, N, 2) array. ``names`` carries
    a source path per contour, ``class_names`` a display name per class id.
    """

    contours: list
    labels: NDArray[np.int64]
    names: list[str] = field(default_factory=list)
    class_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.contours = [np.asarray(c, dtype=np.float64) for c in self.contours]
        self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if self.labels.shape[0] != len(self.contours):
            raise InputError("one label per contour required")
        if self.labels.size and self.labels.min() < 0:
            raise InputError("labels must be nonnegative")

    @property
    def class_count(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def __len__(self):
        return len(self.contours)

    def stacked(self) -> NDArray[np.float64]:
        sizes = {c.shape[0] for c in self.contours}
        if len(sizes) > 1:
            raise InputError(f"contours have different sample counts {sorted(sizes)}; canonicalize first")
        return np.stack(self.contours) if self.contours else np.empty((0, 0, 2))

    def subset(self, idx) -> "LabeledDataset":
        idx = [int(i) for i in idx]
        names = [self.names[i] for i in idx] if self.names else []
        return LabeledDataset([self.contours[i] for i in idx], self.labels[idx], names, list(self.class_names))


def l2_distance(a: ArrayLike, b: ArrayLike) -> float:
    """sqrt(mean_i |a_i - b_i|^2), the L2 norm on the circle with dt = 1/N."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InputError(f"contours must have the same number of samples, got {a.shape} and {b.shape}")
    d = a - b
    return float(np.sqrt(np.sum(d * d) / a.shape[0]))


def distance_matrix(contours: ArrayLike) -> NDArray[np.float64]:
    """Symmetric matrix of pairwise :func:`l2_distance` with zero diagonal."""
    x = np.asarray(contours, dtype=np.float64)
    if x.ndim != 3:
        raise InputError(f"expected an (M, N, 2) stack, got shape {x.shape}")
    flat = np.ascontiguousarray(x.reshape(x.shape[0], -1))
    return kernels.backend.pairwise_l2(flat, x.shape[1])


def class_centroid(contours: ArrayLike, labels: ArrayLike, k: int) -> NDArray[np.float64]:
    """Vertex-wise mean shape of class ``k``."""
    x = np.asarray(contours, dtype=np.float64)
    members = x[np.asarray(labels) == k]
    if members.shape[0] == 0:
        raise InputError(f"class {k} has no members")
    return members.mean(axis=0)


@dataclass(frozen=True)
class DunnReport:
    index: float
    min_inter: float
    max_intra: float
    closest_pair: tuple[int, int]
    widest_class: int


def dunn_report(
    contours: ArrayLike, labels: ArrayLike, dist: NDArray[np.float64] | None = None
) -> DunnReport:
    """Dunn index with its ingredients.

    Inter-class distance is measured between class mean shapes, intra-class
    spread is the largest member-to-member distance. ``dist`` may carry a
    precomputed :func:`distance_matrix`.
    """
    x = np.asarray(contours, dtype=np.float64)
    y = np.asarray(labels)
    classes = np.unique(y)
    if classes.size < 2:
        raise InputError("the Dunn index needs at least two classes")
    if dist is None:
        dist = distance_matrix(x)
    max_intra, widest = -1.0, -1
    for k in classes:
        idx = np.flatnonzero(y == k)
        if idx.size < 2:
            raise DegenerateClusteringError(f"class {k} has fewer than 2 members")
        diam = float(dist[np.ix_(idx, idx)].max())
        if diam > max_intra:
            max_intra, widest = diam, int(k)
    if max_intra <= 0:
        raise DegenerateClusteringError("every class has zero diameter")
    centroids = np.stack([class_centroid(x, y, k) for k in classes])
    inter = distance_matrix(centroids)
    iu = np.triu_indices(classes.size, 1)
    j = int(np.argmin(inter[iu]))
    pair = (int(classes[iu[0][j]]), int(classes[iu[1][j]]))
    min_inter = float(inter[iu][j])
    return DunnReport(min_inter / max_intra, min_inter, max_intra, pair, widest)


def dunn_index(contours: ArrayLike, labels: ArrayLike, dist: NDArray[np.float64] | None = None) -> float:
    return dunn_report(contours, labels, dist).index
