"""Time the compiled and pure-Python kernels against the scalar reference.

    python benchmarks/compare_backends.py --n 1000000 --dataset disk

Two measurements per backend: one top-level extraction (the hot loop alone)
and a full sequential hull. The scalar reference is the branchy
one-point-at-a-time partition from the same backend.
"""
import argparse
import time

from vqhull import (
    DirectedEdge, LaneConfig, Point, available_backends, convex_hull, extract_subsets,
    get_backend,
)
from vqhull.datasets import KINDS, generate
from vqhull.extract import scalar_partition


def best_of(fn, points, reps):
    best = float("inf")
    for _ in range(reps):
        work = points.copy()
        t0 = time.perf_counter()
        fn(work)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dataset", choices=KINDS, default="disk")
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--python-max-n", type=int, default=200_000,
                    help="skip the pure-Python backend above this size")
    args = ap.parse_args()

    points = generate(args.dataset, args.n, args.seed)
    print(f"{args.dataset} n={args.n} seed={args.seed}, best of {args.reps}")
    print(f"{'backend':8} {'kernel':10} {'seconds':>10} {'ns/point':>9} {'vs scalar':>9}")
    for name in available_backends():
        if name == "python" and args.n > args.python_max_n:
            print(f"{name:8} skipped (n > --python-max-n)")
            continue
        kernels = get_backend(name)
        il, ir = kernels.extremes(points.xs, points.ys)
        p, q = Point(*points[il]), Point(*points[ir])
        ea, eb = DirectedEdge(p, q), DirectedEdge(q, p)
        reps = args.reps if name == "cython" else 1
        rows = [
            ("scalar", lambda P: scalar_partition(P, ea, eb, backend=kernels)),
            ("lanes-8", lambda P: extract_subsets(P, ea, eb, backend=kernels)),
            ("lanes-8wc", lambda P: extract_subsets(P, ea, eb, LaneConfig(8, True),
                                                    backend=kernels)),
            ("hull", lambda P: convex_hull(P, in_place=True, backend=kernels)),
        ]
        scalar = None
        for label, fn in rows:
            t = best_of(fn, points, reps)
            scalar = scalar or t
            print(f"{name:8} {label:10} {t:10.4f} {t / args.n * 1e9:9.2f} {scalar / t:8.2f}x")


if __name__ == "__main__":
    main()
