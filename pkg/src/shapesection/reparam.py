"""Canonical resampling of closed contours.

Four families share one mechanism: a nondecreasing weight ``F`` over the
arc-length position ``s`` of the input polyline is inverted at a uniform grid
of targets, and the polyline is evaluated at the resulting positions.

* arc length: ``F(s) = s``
* curvature weighted: ``F(s) = lam * L * s + K(s)`` with ``K`` the running
  integral of ``|kappa|``
* clock: the curve is first cut into ``n`` arcs subtending equal angles at an
  interior reference point; each arc gets its share of samples and is
  resampled with ``F`` restricted to it.

``lam = math.inf`` is the arc-length end of the family and is handled by
dropping the curvature term, never by plugging in a large float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.ndimage import gaussian_filter1d

from . import geometry as geo
from .errors import DegenerateContourError, InputError, ReferencePointError

Contour = geo.Contour

DEFAULT_SAMPLES = 1000
MIN_FINE_SAMPLES = 1000
# curvature smoothing width as a fraction of contour length
DEFAULT_SMOOTH = 0.02


@dataclass(frozen=True)
class ParamFamily:
    """One curvature-weighted clock section.

    ``lam`` is in (0, inf]; ``sectors == 0`` disables the clock subdivision.
    When ``samples`` is not a multiple of ``sectors`` the remainder is spread
    one extra point at a time over the first sectors.
    """

    lam: float = math.inf
    sectors: int = 0
    samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if not (self.lam > 0):
            raise InputError(f"lambda must be > 0 or inf, got {self.lam}")
        if self.sectors < 0:
            raise InputError(f"sectors must be >= 0, got {self.sectors}")
        if self.samples < 3:
            raise InputError(f"samples must be >= 3, got {self.samples}")
        if self.sectors > self.samples:
            raise InputError("more sectors than samples")


def sector_sizes(samples: int, sectors: int) -> NDArray[np.int64]:
    """Points per clock sector: ``samples // sectors`` plus one for the first remainder sectors."""
    base, extra = divmod(samples, sectors)
    sizes = np.full(sectors, base, dtype=np.int64)
    sizes[:extra] += 1
    return sizes


def _evaluate(c: Contour, cum: NDArray[np.float64], s: NDArray[np.float64]) -> Contour:
    closed = np.vstack([c, c[:1]])
    return np.column_stack([np.interp(s, cum, closed[:, 0]), np.interp(s, cum, closed[:, 1])])


def arclength_resample(c: Contour, n_samples: int) -> Contour:
    """``n_samples`` points at equal arc-length spacing, starting at vertex 0."""
    cum = geo.cumulative_length(c)
    s = cum[-1] * np.arange(n_samples) / n_samples
    out = _evaluate(c, cum, s)
    out[0] = c[0]
    return out


def _fine_samples(c: Contour, fine_samples: int | None) -> int:
    if fine_samples is None:
        return max(MIN_FINE_SAMPLES, c.shape[0])
    return fine_samples


def _turning_mass(
    p: Contour, pos: NDArray[np.float64], total: float, smooth: float
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Knots and running total of ``|turning angle|`` spread over each vertex's dual cell.

    ``pos`` holds the arc positions of the vertices of ``p`` on the curve
    being resampled, whose length is ``total``. The turn at vertex ``j`` is
    spread evenly between the midpoints of its two adjacent intervals, so
    ``K`` is continuous and piecewise linear. ``smooth`` is a cyclic Gaussian
    width as a fraction of the vertex count; it moves mass without changing
    the total.
    """
    gaps = np.diff(np.append(pos, total + pos[0]))
    mass = np.abs(geo.turning_angles(p))
    if smooth > 0:
        mass = gaussian_filter1d(mass, smooth * p.shape[0], mode="wrap")
    head = mass[0] * gaps[0] / (gaps[-1] + gaps[0])
    knots = np.concatenate(([0.0], pos + gaps / 2, [total]))
    curv = np.concatenate(([0.0], head + np.concatenate(([0.0], np.cumsum(mass[1:]))), [mass.sum()]))
    return knots, curv


def weight_profile(
    c: Contour, lam: float, fine_samples: int | None = None, smooth: float = DEFAULT_SMOOTH
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Knots ``(s, F)`` of the piecewise-linear cumulative weight.

    ``s`` are arc-length positions on ``c`` from 0 to its length, ``F`` the
    unnormalized weight at those knots. Curvature is measured on an
    arc-length resampling with ``fine_samples`` points (default
    ``max(1000, N)``) so the weight does not depend on how densely the input
    happens to be sampled; ``fine_samples=0`` uses the input vertices as-is.
    ``smooth`` is the Gaussian width of the curvature smoothing as a fraction
    of the contour length (0 disables it).
    """
    cum = geo.cumulative_length(c)
    total = cum[-1]
    if math.isinf(lam):
        return cum, cum.copy()
    if lam < 0:
        raise InputError(f"lambda must be >= 0, got {lam}")
    if smooth < 0:
        raise InputError(f"smooth must be >= 0, got {smooth}")
    nf = _fine_samples(c, fine_samples)
    if nf == 0:
        knots, curv = _turning_mass(c, cum[:-1], total, smooth)
    else:
        # fine vertex k sits at arc position k * total / nf on c by construction
        pos = total * np.arange(nf) / nf
        knots, curv = _turning_mass(arclength_resample(c, nf), pos, total, smooth)
    weight = lam * total * knots + curv
    if not weight[-1] > 0:
        raise DegenerateContourError("curvature weight vanishes everywhere (flat curve, lambda = 0)")
    return knots, weight


def cumulative_weight(
    c: Contour, lam: float, fine_samples: int | None = None, smooth: float = DEFAULT_SMOOTH
) -> NDArray[np.float64]:
    """Normalized curvature-weighted parameter at each input vertex (0 at vertex 0)."""
    knots, weight = weight_profile(c, lam, fine_samples, smooth)
    cum = geo.cumulative_length(c)
    return np.interp(cum[:-1], knots, weight) / weight[-1]


def _invert(knots, weight, targets):
    # weight is strictly increasing for lam > 0, so interp inverts exactly
    return np.interp(targets, weight, knots)


def curvature_weighted_resample(
    c: Contour, lam: float, n_samples: int, fine_samples: int | None = None, smooth: float = DEFAULT_SMOOTH
) -> Contour:
    """Sample ``c`` at the preimages of ``i / n_samples`` under the normalized weight."""
    if math.isinf(lam):
        return arclength_resample(c, n_samples)
    if not lam > 0:
        raise InputError(f"resampling needs lambda > 0, got {lam}")
    knots, weight = weight_profile(c, lam, fine_samples, smooth)
    s = _invert(knots, weight, weight[-1] * np.arange(n_samples) / n_samples)
    out = _evaluate(c, geo.cumulative_length(c), s)
    out[0] = c[0]
    return out


def _orientation(c: Contour, ref: NDArray[np.float64]) -> int:
    w = geo.winding_number(c, ref)
    if abs(w) != 1:
        raise ReferencePointError(f"reference point has winding number {w}, expected +-1")
    return w


def raw_angle(c: Contour, ref: ArrayLike) -> NDArray[np.float64]:
    """Unwrapped angle swept at ``ref`` along vertices 0..N, oriented to end near +2 pi."""
    ref = np.asarray(ref, dtype=np.float64)
    sign = _orientation(c, ref)
    closed = np.vstack([c, c[:1]]) - ref
    theta = np.arctan2(closed[:, 1], closed[:, 0])
    step = np.diff(theta)
    step = (step + np.pi) % (2 * np.pi) - np.pi
    return sign * np.concatenate(([0.0], np.cumsum(step)))


def angle_function(c: Contour, ref: ArrayLike) -> NDArray[np.float64]:
    """Running maximum of the swept angle at ``ref``, one value per vertex 0..N.

    The raw angle can move backwards on contours that are not star-shaped
    around ``ref``; the running maximum keeps "first time the angle reaches"
    well defined.
    """
    return np.maximum.accumulate(raw_angle(c, ref))


def _keypoint_positions(c: Contour, n: int, ref: NDArray[np.float64]) -> NDArray[np.float64]:
    """Arc-length positions where the swept angle first reaches 2 pi k / n."""
    theta = raw_angle(c, ref)
    sign = 1 if theta[-1] > 0 else -1
    peak = np.maximum.accumulate(theta)
    cum = geo.cumulative_length(c)
    closed = np.vstack([c, c[:1]])
    start = math.atan2(c[0, 1] - ref[1], c[0, 0] - ref[0])
    out = np.zeros(n)
    for k in range(1, n):
        target = 2 * np.pi * k / n
        i = int(np.searchsorted(peak, target, side="left"))
        if i == 0 or i > c.shape[0]:
            raise ReferencePointError("angle function never reaches a clock target")
        a, b = closed[i - 1], closed[i]
        # exact intersection of the ray at the target angle with edge (a, b)
        phi = start + sign * target
        u = np.array([math.cos(phi), math.sin(phi)])
        d = b - a
        denom = u[0] * d[1] - u[1] * d[0]
        if denom == 0.0:
            f = 1.0
        else:
            f = -(u[0] * (a[1] - ref[1]) - u[1] * (a[0] - ref[0])) / denom
            f = min(max(f, 0.0), 1.0)
        out[k] = cum[i - 1] + f * (cum[i] - cum[i - 1])
    return out


def clock_keypoints(c: Contour, n: int, ref: ArrayLike) -> NDArray[np.float64]:
    """Normalized arc-length parameters of the ``n`` clock keypoints; the first is 0."""
    if n < 1:
        raise InputError(f"need at least one clock sector, got {n}")
    ref = np.asarray(ref, dtype=np.float64)
    return _keypoint_positions(c, n, ref) / geo.length(c)


def _sectored_resample(c, knots, weight, bounds, sizes):
    cum = geo.cumulative_length(c)
    bw = np.interp(bounds, knots, weight)
    targets = []
    for k, m in enumerate(sizes):
        lo = bw[k]
        hi = bw[k + 1] if k + 1 < len(sizes) else weight[-1]
        targets.append(lo + (hi - lo) * np.arange(m) / m)
    s = _invert(knots, weight, np.concatenate(targets))
    out = _evaluate(c, cum, s)
    out[0] = c[0]
    return out


def clock_resample(c: Contour, n: int, n_samples: int, ref: ArrayLike) -> Contour:
    """Arc-length uniform points inside each of ``n`` equal-angle clock sectors."""
    return curvature_clock_resample(c, ParamFamily(math.inf, n, n_samples), ref)


def curvature_clock_resample(
    c: Contour,
    fam: ParamFamily,
    ref: ArrayLike | None = None,
    fine_samples: int | None = None,
    smooth: float = DEFAULT_SMOOTH,
) -> Contour:
    """Resample ``c`` under the section selected by ``fam``.

    With ``fam.sectors == 0`` this is the plain curvature-weighted family;
    otherwise every clock sector is resampled on its own with the weight
    restricted to that arc. ``ref`` defaults to :func:`reference_point`.
    """
    if fam.sectors == 0:
        return curvature_weighted_resample(c, fam.lam, fam.samples, fine_samples, smooth)
    ref = reference_point(c) if ref is None else np.asarray(ref, dtype=np.float64)
    bounds = _keypoint_positions(c, fam.sectors, ref)
    knots, weight = weight_profile(c, fam.lam, fine_samples, smooth)
    return _sectored_resample(c, knots, weight, bounds, sector_sizes(fam.samples, fam.sectors))


def reference_point(c: Contour) -> NDArray[np.float64]:
    """Interior anchor for the clock construction.

    The area centroid when it is inside the contour. Otherwise the first
    interior centroid of a triangle made of the vertex closest to the area
    centroid and the two vertices ``d`` steps before and after it, for
    ``d = 1, 2, ...``.
    """
    center = geo.area_centroid(c)
    if geo.is_interior(c, center):
        return center
    n = c.shape[0]
    i0 = int(np.argmin(np.sum((c - center) ** 2, axis=1)))
    for d in range(1, (n + 1) // 2):
        tri = c[[i0, (i0 - d) % n, (i0 + d) % n]]
        p = tri.mean(axis=0)
        if geo.is_interior(c, p):
            return p
    raise ReferencePointError("no interior reference point found near the area centroid")
