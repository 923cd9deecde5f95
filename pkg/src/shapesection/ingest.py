"""Reading images and contour files into datasets."""

from __future__ import annotations

import csv
import logging
import os
from collections import Counter
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

from . import geometry as geo
from . import kernels
from .errors import DegenerateContourError, InputError, InvalidContourError
from .metric import LabeledDataset

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 128
MANIFEST_HEADER = ["path", "class_id", "class_name"]


def _pgm_tokens(data: bytes, count: int, pos: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    tokens = []
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise InputError("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def read_pgm(path) -> NDArray[np.uint8]:
    """Decode an 8-bit ASCII (P2) or binary (P5) PGM into a (height, width) array."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise InputError(f"{path}: not a P2/P5 PGM file")
    (w, h, maxval), pos = _pgm_tokens(data, 3, 2)
    try:
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise InputError(f"{path}: bad PGM header") from exc
    if w <= 0 or h <= 0:
        raise InputError(f"{path}: empty image")
    if not 0 < maxval <= 255:
        raise InputError(f"{path}: only 8-bit PGM is supported (maxval {maxval})")
    if magic == b"P5":
        raw = data[pos + 1 : pos + 1 + w * h]
        if len(raw) != w * h:
            raise InputError(f"{path}: truncated pixel data")
        img = np.frombuffer(raw, dtype=np.uint8).reshape(h, w)
    else:
        vals = data[pos:].split()
        if len(vals) < w * h:
            raise InputError(f"{path}: truncated pixel data")
        img = np.array([int(v) for v in vals[: w * h]], dtype=np.int64).reshape(h, w)
        if img.min() < 0 or img.max() > maxval:
            raise InputError(f"{path}: pixel value out of range")
        img = img.astype(np.uint8)
    if maxval != 255:
        img = np.round(img.astype(np.float64) * 255.0 / maxval).astype(np.uint8)
    return img


def write_pgm(img: NDArray, path, binary: bool = True) -> None:
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        if binary:
            fh.write(f"P5\n{w} {h}\n255\n".encode())
            fh.write(img.tobytes())
        else:
            fh.write(f"P2\n{w} {h}\n255\n".encode())
            for row in img:
                fh.write((" ".join(str(int(v)) for v in row) + "\n").encode())


def binarize(img: NDArray, threshold: int = DEFAULT_THRESHOLD) -> NDArray[np.bool_]:
    """Foreground = pixels darker than ``threshold``."""
    if not 0 <= threshold <= 255:
        raise InputError(f"threshold must be in [0, 255], got {threshold}")
    mask = np.asarray(img) < threshold
    n = int(mask.sum())
    if n == 0:
        raise DegenerateContourError("binarized image has no foreground")
    if n == mask.size:
        raise DegenerateContourError("binarized image is all foreground")
    return mask


def largest_component(mask: NDArray) -> NDArray[np.bool_]:
    """Largest 8-connected foreground component (ties: first in raster order)."""
    labels, count = ndimage.label(mask, structure=np.ones((3, 3), dtype=bool))
    if count == 0:
        raise DegenerateContourError("mask has no foreground")
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    return labels == int(np.argmax(sizes))


def prune_collinear(c: NDArray[np.float64], rtol: float = 1e-12) -> NDArray[np.float64]:
    """Drop repeated vertices and vertices in the middle of straight runs.

    U-turns (cross product zero, heading reversed) are kept so thin spikes
    survive.
    """
    c = np.asarray(c, dtype=np.float64)
    while c.shape[0] >= 3:
        prev = c - np.roll(c, 1, axis=0)
        nxt = np.roll(c, -1, axis=0) - c
        same = np.all(nxt == 0, axis=1)
        if same.any():
            c = c[~same]
            continue
        cross = prev[:, 0] * nxt[:, 1] - prev[:, 1] * nxt[:, 0]
        dot = prev[:, 0] * nxt[:, 0] + prev[:, 1] * nxt[:, 1]
        local = np.hypot(*prev.T) * np.hypot(*nxt.T)
        straight = (np.abs(cross) <= rtol * local) & (dot > 0)
        if not straight.any():
            break
        c = c[~straight]
    return c


def trace_boundary(mask: NDArray) -> NDArray[np.float64]:
    """Outer boundary of the largest 8-connected component, at pixel centres.

    Coordinates are ``x = column`` and ``y = height - 1 - row`` so that y
    points up. Straight runs are collapsed to their end pixels.
    """
    comp = largest_component(np.asarray(mask, dtype=bool))
    h = comp.shape[0]
    padded = np.pad(comp, 1).astype(np.uint8)
    rows, cols = np.nonzero(padded)
    r0, c0 = int(rows[0]), int(cols[0])
    rc = kernels.backend.moore_trace(padded, r0, c0, kernels.DIR_ROW, kernels.DIR_COL, kernels.DIR_INDEX)
    pts = np.column_stack([rc[:, 1] - 1, h - rc[:, 0]]).astype(np.float64)
    pts = prune_collinear(pts)
    if pts.shape[0] < 3 or geo.signed_area(pts) == 0:
        raise DegenerateContourError("traced component is too thin to bound any area")
    return pts


def read_contour_csv(path) -> NDArray[np.float64]:
    """Read ``x,y`` rows (optional ``x,y`` header line) into a validated contour."""
    pts = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            if lineno == 1 and [f.strip().lower() for f in row] == ["x", "y"]:
                continue
            if len(row) != 2:
                raise InvalidContourError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                pts.append((float(row[0]), float(row[1])))
            except ValueError as exc:
                raise InvalidContourError(f"{path}:{lineno}: not a number") from exc
    try:
        return geo.as_contour(np.array(pts, dtype=np.float64).reshape(-1, 2))
    except InvalidContourError as exc:
        raise InvalidContourError(f"{path}: {exc}") from exc


def format_float(v: float, digits: int = 17) -> str:
    return f"{float(v):.{digits}g}"


def write_contour_csv(contour, path, digits: int = 17) -> None:
    c = np.asarray(contour, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        fh.write("x,y\n")
        for x, y in c:
            fh.write(f"{format_float(x, digits)},{format_float(y, digits)}\n")


def read_manifest(path) -> list[tuple[str, int, str]]:
    """Rows of (resolved path, class id, class name) sorted by path."""
    path = Path(path)
    base = path.parent
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != MANIFEST_HEADER:
            raise InputError(f"{path}: manifest header must be {','.join(MANIFEST_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise InputError(f"{path}:{lineno}: expected 3 fields")
            try:
                cid = int(row[1])
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: class_id must be an integer") from exc
            p = Path(row[0].strip())
            rows.append((str(p if p.is_absolute() else base / p), cid, row[2].strip()))
    paths = [r[0] for r in rows]
    if len(set(paths)) != len(paths):
        raise InputError(f"{path}: duplicate paths in manifest")
    ids = sorted({r[1] for r in rows})
    if ids != list(range(len(ids))):
        raise InputError(f"{path}: class ids must be dense in [0, K), got {ids}")
    names = {}
    for _, cid, name in rows:
        if names.setdefault(cid, name) != name:
            raise InputError(f"{path}: class {cid} has several names")
    return sorted(rows, key=lambda r: r[0])


def load_contour(path, threshold: int = DEFAULT_THRESHOLD) -> NDArray[np.float64]:
    """Contour from a ``.csv`` file, or traced from a ``.pgm`` image."""
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".csv":
        return read_contour_csv(path)
    if ext == ".pgm":
        return trace_boundary(binarize(read_pgm(path), threshold))
    raise InputError(f"{path}: unsupported file type {ext!r}")


def load_dataset(manifest, threshold: int = DEFAULT_THRESHOLD, check_simple: bool = True) -> LabeledDataset:
    """Load every manifest entry, in sorted path order.

    Self-intersecting contours are rejected for CSV inputs; traced images
    may pinch at one-pixel necks, so for them only a warning is logged.
    """
    rows = read_manifest(manifest)
    contours, labels, names = [], [], []
    for path, cid, _ in rows:
        if not os.path.exists(path):
            raise InputError(f"missing file {path}")
        c = load_contour(path, threshold)
        if check_simple and not geo.is_simple(c):
            if path.lower().endswith(".csv"):
                raise InvalidContourError(f"{path}: contour is self-intersecting")
            log.warning("%s: traced contour touches itself", path)
        contours.append(c)
        labels.append(cid)
        names.append(path)
    counts = Counter(labels)
    if len(set(counts.values())) > 1:
        log.warning("classes have different sizes: %s", dict(sorted(counts.items())))
    class_names = [""] * len(counts)
    for _, cid, name in rows:
        class_names[cid] = name
    return LabeledDataset(contours, labels, names, class_names)
