"""Wall-clock comparison of the numba and pure-numpy kernel backends.

Each kernel runs once untimed (JIT warm-up), then ``--repeats`` times on the
same inputs; the table shows the median per call and the speed-up.

Run:

    python benchmarks/bench_kernels.py --repeats 7
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from shapesection import kernels
from shapesection import synthetic as sy


def median_time(fn, repeats: int) -> float:
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cases(rng: np.random.Generator):
    """(name, callable taking a backend) pairs on fixed inputs."""
    poly = sy.random_smooth_polygon(rng, 2000)
    xs, ys = np.ascontiguousarray(poly[:, 0]), np.ascontiguousarray(poly[:, 1])
    probes = rng.uniform(-1, 1, (200, 2))
    flat = rng.normal(size=(150, 2000))
    padded = np.pad(sy.disk_image(400, 170.0) < 128, 1).astype(np.uint8)
    rows, cols = np.nonzero(padded)
    r0, c0 = int(rows[0]), int(cols[0])

    def winding(b):
        for px, py in probes:
            b.winding_number(xs, ys, px, py)

    def distance(b):
        for px, py in probes:
            b.min_edge_distance(xs, ys, px, py)

    return [
        ("winding_number x200 (N=2000)", winding),
        ("min_edge_distance x200 (N=2000)", distance),
        ("has_self_intersection (N=2000)", lambda b: b.has_self_intersection(xs, ys)),
        ("pairwise_l2 (150 x 1000 pts)", lambda b: b.pairwise_l2(flat, 1000)),
        ("moore_trace (disk r=170)", lambda b: b.moore_trace(padded, r0, c0, kernels.DIR_ROW, kernels.DIR_COL, kernels.DIR_INDEX)),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if kernels.numba_backend is None:
        print("numba backend unavailable (not installed or SHAPESECTION_NUMBA=0); timing numpy only")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speed-up':>9s}")
    for name, fn in cases(rng):
        t_np = median_time(lambda: fn(kernels.numpy_backend), args.repeats)
        if kernels.numba_backend is None:
            print(f"{name:34s} {t_np * 1e3:11.3f} {'-':>11s} {'-':>9s}")
            continue
        t_nb = median_time(lambda: fn(kernels.numba_backend), args.repeats)
        print(f"{name:34s} {t_np * 1e3:11.3f} {t_nb * 1e3:11.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
