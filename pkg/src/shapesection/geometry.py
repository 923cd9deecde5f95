"""Discrete invariants of closed plane polylines.

A contour is an ``(N, 2)`` float array of distinct consecutive vertices; the
closing edge from vertex ``N-1`` back to vertex 0 is implicit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.ndimage import gaussian_filter1d

from . import kernels
from .errors import (
    AmbiguousEllipseError,
    BoundaryPointError,
    DegenerateContourError,
    InvalidContourError,
)

Contour = NDArray[np.float64]

ELLIPSE_RTOL = 1e-8
BOUNDARY_RTOL = 1e-9


@dataclass(frozen=True)
class EllipseFrame:
    center: NDArray[np.float64]
    major_axis: NDArray[np.float64]
    minor_axis: NDArray[np.float64]
    major_len: float
    minor_len: float


def as_contour(points: ArrayLike, check_simple: bool = False) -> Contour:
    """Validate and return ``points`` as a float contour array.

    Raises InvalidContourError on wrong shape, fewer than 3 vertices,
    non-finite values, zero-length edges, or (if ``check_simple``) a
    self-intersecting polyline.
    """
    c = np.ascontiguousarray(points, dtype=np.float64)
    if c.ndim != 2 or c.shape[1] != 2:
        raise InvalidContourError(f"expected an (N, 2) array, got shape {c.shape}")
    if c.shape[0] < 3:
        raise InvalidContourError(f"a contour needs at least 3 vertices, got {c.shape[0]}")
    if not np.all(np.isfinite(c)):
        raise InvalidContourError("contour has non-finite coordinates")
    if np.any(np.all(c == np.roll(c, -1, axis=0), axis=1)):
        raise InvalidContourError("contour has repeated consecutive vertices")
    if check_simple and not is_simple(c):
        raise InvalidContourError("contour is self-intersecting")
    return c


def is_simple(c: Contour) -> bool:
    return not kernels.backend.has_self_intersection(
        np.ascontiguousarray(c[:, 0]), np.ascontiguousarray(c[:, 1])
    )


def edge_vectors(c: Contour) -> NDArray[np.float64]:
    """Vectors from vertex i to vertex i+1, closing edge included."""
    c = np.asarray(c, dtype=np.float64)
    return np.roll(c, -1, axis=0) - c


def edge_lengths(c: Contour) -> NDArray[np.float64]:
    e = edge_vectors(c)
    return np.hypot(e[:, 0], e[:, 1])


def cumulative_length(c: Contour) -> NDArray[np.float64]:
    """Arc-length position of vertices 0..N, the last entry being the total length."""
    return np.concatenate(([0.0], np.cumsum(edge_lengths(c))))


def length(c: Contour) -> float:
    return float(np.sum(edge_lengths(c)))


def signed_area(c: Contour) -> float:
    """Shoelace area; positive for counterclockwise travel."""
    c = np.asarray(c, dtype=np.float64)
    x, y = c[:, 0], c[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return float(0.5 * np.sum(x * yn - xn * y))


def contour_centroid(c: Contour) -> NDArray[np.float64]:
    """Arc-length weighted centre of mass of the curve itself."""
    c = np.asarray(c, dtype=np.float64)
    lens = edge_lengths(c)
    mids = 0.5 * (c + np.roll(c, -1, axis=0))
    return (mids * lens[:, None]).sum(axis=0) / lens.sum()


def area_centroid(c: Contour) -> NDArray[np.float64]:
    """Centre of gravity of the enclosed region.

    The sign of the area cancels, so the result does not depend on the
    direction of travel.
    """
    c = np.asarray(c, dtype=np.float64)
    x, y = c[:, 0], c[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = 0.5 * cross.sum()
    scale = float(np.ptp(c, axis=0).max()) ** 2
    if abs(a) <= 1e-14 * scale:
        raise DegenerateContourError("contour encloses zero area")
    cx = ((x + xn) * cross).sum() / (6.0 * a)
    cy = ((y + yn) * cross).sum() / (6.0 * a)
    return np.array([cx, cy])


def turning_angles(c: Contour) -> NDArray[np.float64]:
    """Signed exterior angle at each vertex, in (-pi, pi]."""
    e = edge_vectors(c)
    prev = np.roll(e, 1, axis=0)
    cross = prev[:, 0] * e[:, 1] - prev[:, 1] * e[:, 0]
    dot = prev[:, 0] * e[:, 0] + prev[:, 1] * e[:, 1]
    return np.arctan2(cross, dot)


def vertex_lengths(c: Contour) -> NDArray[np.float64]:
    """Mean of the two edge lengths adjacent to each vertex."""
    lens = edge_lengths(c)
    return 0.5 * (lens + np.roll(lens, 1))


def discrete_curvature(c: Contour, smooth: float = 0.0) -> NDArray[np.float64]:
    """Signed curvature per vertex: turning angle over mean adjacent edge length.

    ``smooth`` is an optional Gaussian window (in vertices) applied cyclically
    to the coordinates first; 0 disables it.
    """
    if smooth > 0:
        c = gaussian_filter1d(c, smooth, axis=0, mode="wrap")
    return turning_angles(c) / vertex_lengths(c)


def _segment_second_moment(c: Contour, center: NDArray[np.float64]) -> NDArray[np.float64]:
    # exact integral of (p - center)(p - center)^T ds along each straight edge
    a = c - center
    b = np.roll(a, -1, axis=0)
    lens = edge_lengths(c)
    m = (
        np.einsum("i,ij,ik->jk", lens, a, a)
        + 0.5 * np.einsum("i,ij,ik->jk", lens, a, b)
        + 0.5 * np.einsum("i,ij,ik->jk", lens, b, a)
        + np.einsum("i,ij,ik->jk", lens, b, b)
    ) / 3.0
    return m / lens.sum()


def best_fit_ellipse(c: Contour, rtol: float = ELLIPSE_RTOL) -> EllipseFrame:
    """Principal axes of the arc-length weighted second moments about the contour centroid."""
    center = contour_centroid(c)
    evals, evecs = np.linalg.eigh(_segment_second_moment(c, center))
    lo, hi = max(evals[0], 0.0), max(evals[1], 0.0)
    if hi - lo <= rtol * hi:
        raise AmbiguousEllipseError("second moments are isotropic; ellipse axes undefined")
    major = evecs[:, 1]
    # fix the sign of the eigenvector deterministically
    if major[0] < 0 or (major[0] == 0 and major[1] < 0):
        major = -major
    minor = np.array([-major[1], major[0]])
    return EllipseFrame(center, major, minor, float(np.sqrt(hi)), float(np.sqrt(lo)))


def boundary_tolerance(c: Contour) -> float:
    return BOUNDARY_RTOL * float(np.hypot(*np.ptp(c, axis=0)))


def winding_number(c: Contour, p: ArrayLike) -> int:
    """Signed winding number of ``c`` around point ``p``.

    Raises BoundaryPointError if ``p`` lies within tolerance of an edge.
    """
    px, py = (float(v) for v in np.asarray(p, dtype=np.float64))
    xs = np.ascontiguousarray(c[:, 0])
    ys = np.ascontiguousarray(c[:, 1])
    if kernels.backend.min_edge_distance(xs, ys, px, py) <= boundary_tolerance(c):
        raise BoundaryPointError(f"point ({px}, {py}) lies on the contour")
    return int(kernels.backend.winding_number(xs, ys, px, py))


def is_interior(c: Contour, p: ArrayLike) -> bool:
    """Winding number is nonzero; points on the boundary count as outside."""
    try:
        return winding_number(c, p) != 0
    except BoundaryPointError:
        return False


def rotation_matrix(theta: float) -> NDArray[np.float64]:
    ct, st = np.cos(theta), np.sin(theta)
    return np.array([[ct, -st], [st, ct]])
