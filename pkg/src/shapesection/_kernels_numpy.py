"""Pure-numpy implementations of the hot kernels.

Every function here has a twin with the same signature in
``_kernels_numba``. Boundary tracing is inherently sequential, so its
fallback is a plain loop that numba also compiles as-is.
"""

import numpy as np

# Moore neighbourhood, clockwise on screen (row axis points down), starting west.
DIR_ROW = np.array([0, -1, -1, -1, 0, 1, 1, 1], dtype=np.int64)
DIR_COL = np.array([-1, -1, 0, 1, 1, 1, 0, -1], dtype=np.int64)
# DIR_INDEX[dr + 1, dc + 1] -> direction index
DIR_INDEX = np.array([[1, 2, 3], [0, -1, 4], [7, 6, 5]], dtype=np.int64)


def winding_number(xs, ys, px, py):
    """Crossing-rule winding number of (px, py) w.r.t. the closed polyline."""
    x0, y0 = xs, ys
    x1, y1 = np.roll(xs, -1), np.roll(ys, -1)
    cross = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
    up = (y0 <= py) & (y1 > py) & (cross > 0)
    down = (y0 > py) & (y1 <= py) & (cross < 0)
    return int(np.count_nonzero(up)) - int(np.count_nonzero(down))


def min_edge_distance(xs, ys, px, py):
    """Smallest Euclidean distance from (px, py) to any closed-polyline edge."""
    x0, y0 = xs, ys
    dx = np.roll(xs, -1) - x0
    dy = np.roll(ys, -1) - y0
    ll = dx * dx + dy * dy
    t = np.clip(((px - x0) * dx + (py - y0) * dy) / np.where(ll > 0, ll, 1.0), 0.0, 1.0)
    ex = x0 + t * dx - px
    ey = y0 + t * dy - py
    return float(np.sqrt(np.min(ex * ex + ey * ey)))


def _orient(ax, ay, bx, by, cx, cy):
    return np.sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def _on_segment(ax, ay, bx, by, cx, cy):
    # c collinear with ab assumed
    return (
        (np.minimum(ax, bx) <= cx)
        & (cx <= np.maximum(ax, bx))
        & (np.minimum(ay, by) <= cy)
        & (cy <= np.maximum(ay, by))
    )


def has_self_intersection(xs, ys):
    """True if any two non-adjacent edges of the closed polyline meet."""
    n = xs.shape[0]
    x1, y1 = np.roll(xs, -1), np.roll(ys, -1)
    for i in range(n - 2):
        j0 = i + 2
        j1 = n - 1 if i == 0 else n
        if j0 >= j1:
            continue
        ax, ay, bx, by = xs[i], ys[i], x1[i], y1[i]
        cx, cy, dx, dy = xs[j0:j1], ys[j0:j1], x1[j0:j1], y1[j0:j1]
        o1 = _orient(ax, ay, bx, by, cx, cy)
        o2 = _orient(ax, ay, bx, by, dx, dy)
        o3 = _orient(cx, cy, dx, dy, ax, ay)
        o4 = _orient(cx, cy, dx, dy, bx, by)
        hit = (o1 * o2 < 0) & (o3 * o4 < 0)
        hit |= (o1 == 0) & _on_segment(ax, ay, bx, by, cx, cy)
        hit |= (o2 == 0) & _on_segment(ax, ay, bx, by, dx, dy)
        hit |= (o3 == 0) & _on_segment(cx, cy, dx, dy, ax, ay)
        hit |= (o4 == 0) & _on_segment(cx, cy, dx, dy, bx, by)
        if np.any(hit):
            return True
    return False


def moore_trace(mask, r0, c0, dir_row, dir_col, dir_index):
    """Moore-neighbour tracing with Jacob's stopping criterion.

    ``mask`` must be zero-padded by one pixel so neighbours never go out of
    bounds, and (r0, c0) must be the first foreground pixel in raster order
    (its west neighbour is background). Returns an (K, 2) array of (row, col).
    """
    max_steps = 4 * mask.shape[0] * mask.shape[1] + 16
    rows = np.empty(max_steps, dtype=np.int64)
    cols = np.empty(max_steps, dtype=np.int64)
    rows[0] = r0
    cols[0] = c0
    count = 1
    r, c = r0, c0
    back = 0
    start_back = -1
    for _ in range(max_steps):
        found = -1
        for k in range(1, 9):
            d = (back + k) % 8
            if mask[r + dir_row[d], c + dir_col[d]]:
                found = d
                break
        if found < 0:
            break  # isolated pixel
        prev = (found + 7) % 8
        br = r + dir_row[prev]
        bc = c + dir_col[prev]
        nr = r + dir_row[found]
        nc = c + dir_col[found]
        nback = dir_index[br - nr + 1, bc - nc + 1]
        if r == r0 and c == c0:
            if start_back < 0:
                start_back = found
            elif found == start_back:
                count -= 1  # start was appended on arrival; loop closed
                break
        r, c, back = nr, nc, nback
        rows[count] = r
        cols[count] = c
        count += 1
    out = np.empty((count, 2), dtype=np.int64)
    out[:, 0] = rows[:count]
    out[:, 1] = cols[:count]
    return out


def pairwise_l2(flat, npts):
    """Discrete L2 distances between rows of ``flat`` (M, 2N), dt = 1/npts."""
    m = flat.shape[0]
    out = np.zeros((m, m))
    for i in range(m - 1):
        diff = flat[i + 1 :] - flat[i]
        d = np.sqrt(np.einsum("ij,ij->i", diff, diff) / npts)
        out[i, i + 1 :] = d
        out[i + 1 :, i] = d
    return out
