"""Standardization over the finite-dimensional shape-preserving groups.

Steps run in a fixed order: direction of travel, starting vertex, scale,
translation, rotation. Each step is idempotent on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import geometry as geo
from .errors import DegenerateContourError, InputError, NumericalError

Contour = geo.Contour

DIRECTIONS = ("ccw", "none")
STARTS = ("max_y", "none")
SCALES = ("unit_length", "unit_area", "none")
TRANSLATES = ("area_centroid", "contour_centroid", "start_origin", "none")
ROTATES = ("tip_vertical", "ellipse_axes", "none")


@dataclass(frozen=True)
class NormalizationPlan:
    direction: str = "ccw"
    start: str = "max_y"
    scale: str = "unit_length"
    translate: str = "area_centroid"
    rotate: str = "tip_vertical"

    def __post_init__(self):
        allowed = {
            "direction": DIRECTIONS,
            "start": STARTS,
            "scale": SCALES,
            "translate": TRANSLATES,
            "rotate": ROTATES,
        }
        for f in fields(self):
            value = getattr(self, f.name)
            if value not in allowed[f.name]:
                raise InputError(f"plan.{f.name}: unknown option {value!r}, expected one of {allowed[f.name]}")


SELECTED_PLAN = NormalizationPlan()
IDENTITY_PLAN = NormalizationPlan("none", "none", "none", "none", "none")


def reverse_direction(c: Contour) -> Contour:
    """Travel the contour backwards while keeping vertex 0 in place."""
    return np.roll(c[::-1], 1, axis=0)


def ensure_ccw(c: Contour) -> Contour:
    a = geo.signed_area(c)
    if a == 0:
        raise DegenerateContourError("zero signed area; direction of travel undefined")
    return c if a > 0 else reverse_direction(c)


def set_start_max_y(c: Contour) -> Contour:
    """Rotate indices so vertex 0 has the largest y (ties: smallest x, then smallest index)."""
    order = np.lexsort((np.arange(c.shape[0]), c[:, 0], -c[:, 1]))
    return np.roll(c, -int(order[0]), axis=0)


def scale_normalize(c: Contour, mode: str = "unit_length") -> Contour:
    if mode == "unit_length":
        return c / geo.length(c)
    if mode == "unit_area":
        a = abs(geo.signed_area(c))
        if a == 0:
            raise DegenerateContourError("zero area; cannot scale to unit area")
        return c / np.sqrt(a)
    if mode == "none":
        return c
    raise InputError(f"unknown scale mode {mode!r}")


def translation_anchor(c: Contour, mode: str) -> NDArray[np.float64]:
    if mode == "area_centroid":
        return geo.area_centroid(c)
    if mode == "contour_centroid":
        return geo.contour_centroid(c)
    if mode == "start_origin":
        return c[0].copy()
    if mode == "none":
        return np.zeros(2)
    raise InputError(f"unknown translate mode {mode!r}")


def translate_normalize(c: Contour, mode: str = "area_centroid") -> Contour:
    """Move the chosen anchor point to the origin."""
    return c - translation_anchor(c, mode)


def _rotate_about(c: Contour, theta: float, center: NDArray[np.float64]) -> Contour:
    return (c - center) @ geo.rotation_matrix(theta).T + center


def _ellipse_angle(c: Contour, center: NDArray[np.float64]) -> float:
    frame = geo.best_fit_ellipse(c)
    major = frame.major_axis
    # rotation taking the major axis to +y
    theta = np.pi / 2 - np.arctan2(major[1], major[0])
    # the axis sign is arbitrary: put the farther extreme along the major axis on top
    proj = (c - center) @ major
    if proj.max() < -proj.min():
        theta += np.pi
    return float(theta)


def rotate_normalize(c: Contour, mode: str = "tip_vertical", center: ArrayLike | None = None) -> Contour:
    """Rotate the contour in the plane.

    ``ellipse_axes`` puts the major axis of the best-fit ellipse vertical;
    ``tip_vertical`` puts vertex 0 straight above the area centroid. The
    rotation centre defaults to the ellipse centre or the area centroid
    respectively.
    """
    if mode == "none":
        return c
    if mode == "ellipse_axes":
        ctr = geo.contour_centroid(c) if center is None else np.asarray(center, dtype=np.float64)
        return _rotate_about(c, _ellipse_angle(c, ctr), ctr)
    if mode == "tip_vertical":
        ctr = geo.area_centroid(c) if center is None else np.asarray(center, dtype=np.float64)
        v = c[0] - geo.area_centroid(c)
        if np.hypot(*v) <= geo.boundary_tolerance(c):
            raise DegenerateContourError("tip coincides with the area centroid")
        theta = np.pi / 2 - np.arctan2(v[1], v[0])
        out = _rotate_about(c, theta, ctr)
        return out
    raise InputError(f"unknown rotate mode {mode!r}")


def apply_plan(c: Contour, plan: NormalizationPlan = SELECTED_PLAN) -> Contour:
    """Run every step of ``plan`` in order.

    Errors keep their type and get the failing step prefixed to the message.
    """
    anchor_after_translate = None
    steps = (
        ("direction", lambda x: ensure_ccw(x) if plan.direction == "ccw" else x),
        ("start", lambda x: set_start_max_y(x) if plan.start == "max_y" else x),
        ("scale", lambda x: scale_normalize(x, plan.scale)),
        ("translate", lambda x: translate_normalize(x, plan.translate)),
    )
    for name, step in steps:
        try:
            c = step(c)
        except (NumericalError, InputError) as exc:
            raise type(exc)(f"{name}: {exc}") from exc
    if plan.translate != "none":
        anchor_after_translate = np.zeros(2)
    try:
        if plan.rotate == "ellipse_axes":
            c = rotate_normalize(c, "ellipse_axes", anchor_after_translate)
        elif plan.rotate == "tip_vertical":
            c = rotate_normalize(c, "tip_vertical")
    except (NumericalError, InputError) as exc:
        raise type(exc)(f"rotate: {exc}") from exc
    return c
