"""Synthetic contours and datasets for tests, demos and benchmarks."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .geometry import rotation_matrix
from .metric import LabeledDataset


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> NDArray[np.float64]:
    t = phase + 2 * np.pi * np.arange(n) / n
    return np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)])


def ellipse(a: float, b: float, n: int, angle: float = 0.0) -> NDArray[np.float64]:
    t = 2 * np.pi * np.arange(n) / n
    pts = np.column_stack([a * np.cos(t), b * np.sin(t)])
    return pts @ rotation_matrix(angle).T


def polar_curve(radius_fn, n: int, param=None) -> NDArray[np.float64]:
    """Closed star-shaped curve r(t) sampled at ``param`` (uniform by default)."""
    t = 2 * np.pi * np.arange(n) / n if param is None else np.asarray(param)
    r = radius_fn(t)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def star(n: int, arms: int = 5, depth: float = 0.3, phase: float = 0.0) -> NDArray[np.float64]:
    return polar_curve(lambda t: 1.0 + depth * np.cos(arms * (t - phase)), n)


def random_smooth_polygon(rng: np.random.Generator, n: int = 400, modes: int = 5, amp: float = 0.25):
    """Star-shaped polygon with a random low-frequency radius profile."""
    coef = rng.normal(size=(modes, 2)) * amp / np.arange(1, modes + 1)[:, None]

    def radius(t):
        k = np.arange(1, modes + 1)[:, None]
        return 1.0 + (coef[:, :1] * np.cos(k * t) + coef[:, 1:] * np.sin(k * t)).sum(axis=0)

    return polar_curve(radius, n, 2 * np.pi * (np.arange(n) + rng.uniform(0, 0.5)) / n)


def random_simple_polygon(rng: np.random.Generator, n: int) -> NDArray[np.float64]:
    """Star-shaped polygon with random radii at sorted random angles (CCW)."""
    t = np.sort(rng.uniform(0, 2 * np.pi, n))
    r = rng.uniform(0.3, 1.0, n)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def leaf(n: int = 600, width: float = 0.45, sharpness: float = 0.6) -> NDArray[np.float64]:
    """Leaf outline with a pointed tip at the top; vertex 0 is the tip, CCW.

    The tip is a true corner (about 45 degrees either side of vertical for the
    defaults), so it stays the highest vertex under small rotations.
    """
    t = 2 * np.pi * np.arange(n) / n
    x = width * np.sin(t) * (1 - 0.3 * np.cos(t))
    y = np.cos(t) - sharpness * np.abs(np.sin(t / 2))
    return np.column_stack([-x, y])


def peduncle_leaf(
    n_blade: int = 800,
    stalk_length: float = 0.8,
    stalk_width: float = 0.04,
    serration: float = 0.04,
    teeth: int = 30,
) -> NDArray[np.float64]:
    """Wavy-edged disk with a thin straight stalk pointing down, CCW.

    The stalk has straight sides and a rounded end, so its curvature per unit
    length is far lower than on the wavy blade.
    """
    half = stalk_width / 2
    gap = np.arcsin(half)
    t0, span = -np.pi / 2 + gap, 2 * np.pi - 2 * gap
    u = np.arange(n_blade) / (n_blade - 1)
    t = t0 + span * u
    r = 1.0 + serration * np.sin(2 * np.pi * teeth * u)
    blade = np.column_stack([r * np.cos(t), r * np.sin(t)])
    y_top = -np.sqrt(1 - half**2)
    y_end = y_top - stalk_length
    m = max(int(60 * stalk_length), 4)
    left = np.column_stack([np.full(m, -half), np.linspace(y_top, y_end, m)])[1:]
    a = np.linspace(np.pi, 2 * np.pi, 12)[1:-1]
    cap = np.column_stack([half * np.cos(a), y_end + half * np.sin(a)])
    right = np.column_stack([np.full(m, half), np.linspace(y_end, y_top, m)])[:-1]
    return np.vstack([blade[:-1], left, cap, right])


def crescent(n: int = 400, r_out: float = 1.0, r_in: float = 0.7, span: float = 1.6 * np.pi) -> NDArray[np.float64]:
    """Annulus sector centred on the +x axis; its area centroid lies in the hole."""
    t = -span / 2 + span * np.arange(n) / (n - 1)
    outer = np.column_stack([r_out * np.cos(t), r_out * np.sin(t)])
    inner = np.column_stack([r_in * np.cos(t[::-1]), r_in * np.sin(t[::-1])])
    return np.vstack([outer, inner])


def similarity(c, angle: float = 0.0, scale: float = 1.0, shift=(0.0, 0.0)) -> NDArray[np.float64]:
    return scale * np.asarray(c) @ rotation_matrix(angle).T + np.asarray(shift)


def jittered_copies(base, rng: np.random.Generator, count: int, max_angle: float = 0.15):
    """Random similarity transforms plus cyclic index shifts of ``base``."""
    out = []
    for _ in range(count):
        c = np.roll(base, int(rng.integers(base.shape[0])), axis=0)
        out.append(
            similarity(c, rng.uniform(-max_angle, max_angle), rng.uniform(0.5, 3.0), rng.uniform(-5, 5, 2))
        )
    return out


def circles_vs_squares(rng: np.random.Generator, per_class: int = 8) -> LabeledDataset:
    """Two shape classes under random similarity transforms and index shifts."""
    circle = regular_polygon(240)
    square = np.vstack(
        [
            np.column_stack([np.linspace(-1, 1, 60, endpoint=False), np.full(60, -1.0)]),
            np.column_stack([np.full(60, 1.0), np.linspace(-1, 1, 60, endpoint=False)]),
            np.column_stack([np.linspace(1, -1, 60, endpoint=False), np.full(60, 1.0)]),
            np.column_stack([np.full(60, -1.0), np.linspace(1, -1, 60, endpoint=False)]),
        ]
    )
    # a small notch keeps the maximum-y vertex unique on both shapes
    circle = circle @ rotation_matrix(0.01).T
    square = square.copy()
    square[150, 1] += 0.5
    contours = jittered_copies(circle, rng, per_class) + jittered_copies(square, rng, per_class)
    labels = [0] * per_class + [1] * per_class
    return LabeledDataset(contours, labels, class_names=["circle", "square"])


def disk_image(size: int, radius: float, center=None, fg: int = 0, bg: int = 255) -> NDArray[np.uint8]:
    """Grayscale image with a dark disk, sampled at pixel centres."""
    cy, cx = (size / 2 - 0.5, size / 2 - 0.5) if center is None else center
    rr, cc = np.mgrid[:size, :size]
    img = np.full((size, size), bg, dtype=np.uint8)
    img[(rr - cy) ** 2 + (cc - cx) ** 2 <= radius**2] = fg
    return img
