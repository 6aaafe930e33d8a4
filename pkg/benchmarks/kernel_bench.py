"""Micro-benchmark of the compiled kernels against the pure-Python fallback.

Run from the repository root:

    python3 benchmarks/kernel_bench.py [--repeats N]

Both backends are timed on identical inputs; results include the per-call
time of each kernel and the compiled/Python speedup.
"""

import argparse
import time

import numpy as np

from graphmotion.backend import get_backend

UR_DH = np.array([
    [0.0, np.pi / 2, 0.1625, 0.0],
    [-0.425, 0.0, 0.0, 0.0],
    [-0.3922, 0.0, 0.0, 0.0],
    [0.0, np.pi / 2, 0.1333, 0.0],
    [0.0, -np.pi / 2, 0.0997, 0.0],
    [0.0, 0.0, 0.0996, 0.0],
])
UR_RADII = np.array([0.06, 0.05, 0.05, 0.04, 0.04, 0.04])


def make_cases(seed=0):
    rng = np.random.default_rng(seed)
    segs = rng.uniform(-1.0, 1.0, (200, 2, 3))
    boxes_lo = rng.uniform(-1.0, 0.5, (40, 3))
    boxes = np.hstack([boxes_lo, boxes_lo + rng.uniform(0.1, 0.5, (40, 3))])
    caps = np.hstack([rng.uniform(-1.0, 1.0, (10, 6)),
                      rng.uniform(0.03, 0.08, (10, 1))])
    angles = rng.uniform(-np.pi, np.pi, (50, 6))
    path = np.cumsum(rng.uniform(-0.05, 0.05, (200, 6)), axis=0)
    return {
        "fk_points": [(UR_DH, a) for a in angles],
        "seg_box_dist2": [(s[0], s[1], b[:3], b[3:])
                          for s in segs[:50] for b in boxes[:10]],
        "seg_seg_dist2": [(a[0], a[1], b[0], b[1])
                          for a in segs[:30] for b in segs[30:60]],
        "path_collides": [(UR_DH, UR_RADII, path, boxes, caps)],
    }


def time_kernel(fn, calls, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        for args in calls:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best / len(calls)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5,
                    help="timing repeats; the best is reported")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = {}
    for name in ("c", "python"):
        try:
            backends[name] = get_backend(name)
        except ImportError:
            print(f"backend {name!r} unavailable, skipping")
    cases = make_cases(args.seed)

    print(f"{'kernel':<16}{'calls':>8}", end="")
    for name in backends:
        print(f"{name + ' [us]':>14}", end="")
    if len(backends) == 2:
        print(f"{'speedup':>10}", end="")
    print()
    for kernel, calls in cases.items():
        per_call = {}
        for name, mod in backends.items():
            per_call[name] = time_kernel(getattr(mod, kernel), calls,
                                         args.repeats)
        print(f"{kernel:<16}{len(calls):>8}", end="")
        for name in backends:
            print(f"{per_call[name] * 1e6:>14.2f}", end="")
        if len(per_call) == 2:
            print(f"{per_call['python'] / per_call['c']:>9.1f}x", end="")
        print()


if __name__ == "__main__":
    main()
