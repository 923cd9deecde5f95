"""numba-compiled twins of ``_kernels_numpy``."""

import numpy as np
from numba import njit

from . import _kernels_numpy as _np

DIR_ROW = _np.DIR_ROW
DIR_COL = _np.DIR_COL
DIR_INDEX = _np.DIR_INDEX


@njit(cache=True)
def winding_number(xs, ys, px, py):
    n = xs.shape[0]
    wn = 0
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        x0, y0, x1, y1 = xs[i], ys[i], xs[j], ys[j]
        cross = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
        if y0 <= py:
            if y1 > py and cross > 0:
                wn += 1
        elif y1 <= py and cross < 0:
            wn -= 1
    return wn


@njit(cache=True)
def min_edge_distance(xs, ys, px, py):
    n = xs.shape[0]
    best = np.inf
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        dx = xs[j] - xs[i]
        dy = ys[j] - ys[i]
        ll = dx * dx + dy * dy
        t = 0.0
        if ll > 0:
            t = ((px - xs[i]) * dx + (py - ys[i]) * dy) / ll
            t = min(max(t, 0.0), 1.0)
        ex = xs[i] + t * dx - px
        ey = ys[i] + t * dy - py
        d = ex * ex + ey * ey
        if d < best:
            best = d
    return np.sqrt(best)


@njit(cache=True, inline="always")
def _orient(ax, ay, bx, by, cx, cy):
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


@njit(cache=True, inline="always")
def _on_segment(ax, ay, bx, by, cx, cy):
    return min(ax, bx) <= cx <= max(ax, bx) and min(ay, by) <= cy <= max(ay, by)


@njit(cache=True)
def has_self_intersection(xs, ys):
    n = xs.shape[0]
    for i in range(n - 2):
        ax, ay = xs[i], ys[i]
        bx, by = xs[i + 1], ys[i + 1]
        j1 = n - 1 if i == 0 else n
        for j in range(i + 2, j1):
            k = j + 1 if j + 1 < n else 0
            cx, cy, dx, dy = xs[j], ys[j], xs[k], ys[k]
            o1 = _orient(ax, ay, bx, by, cx, cy)
            o2 = _orient(ax, ay, bx, by, dx, dy)
            o3 = _orient(cx, cy, dx, dy, ax, ay)
            o4 = _orient(cx, cy, dx, dy, bx, by)
            if o1 * o2 < 0 and o3 * o4 < 0:
                return True
            if o1 == 0 and _on_segment(ax, ay, bx, by, cx, cy):
                return True
            if o2 == 0 and _on_segment(ax, ay, bx, by, dx, dy):
                return True
            if o3 == 0 and _on_segment(cx, cy, dx, dy, ax, ay):
                return True
            if o4 == 0 and _on_segment(cx, cy, dx, dy, bx, by):
                return True
    return False


moore_trace = njit(cache=True)(_np.moore_trace)


@njit(cache=True)
def pairwise_l2(flat, npts):
    m, d = flat.shape
    out = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            acc = 0.0
            for k in range(d):
                t = flat[i, k] - flat[j, k]
                acc += t * t
            v = np.sqrt(acc / npts)
            out[i, j] = v
            out[j, i] = v
    return out
