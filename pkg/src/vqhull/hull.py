"""Quickhull driver: extremes, recursive partitioning and in-place chain assembly.

Every recursive call leaves its part of the hull as a contiguous prefix of its
own range, so the input arrays double as the output buffer. Subtrees with one
worker run entirely inside the sequential kernel.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._backend import (
    CALLS, MOVES, OVERHEAD, SUM_CH2, SUM_P, SUM_S1, SUM_S2, get_backend, new_counters, new_stats,
)
from .config import HullConfig
from .extract import edge_pair
from .geometry import DirectedEdge, Point, PointSet
from .parallel import WorkerLayout, parallel_extract
from .traffic import HullProbe


@dataclass
class HullPolygon:
    """Hull vertices in clockwise order, starting at the leftmost(-lowest) point."""

    xs: np.ndarray
    ys: np.ndarray

    @classmethod
    def empty(cls) -> "HullPolygon":
        return cls(np.empty(0), np.empty(0))

    @property
    def h(self) -> int:
        return self.xs.shape[0]

    def __len__(self) -> int:
        return self.h

    def __iter__(self) -> Iterator[Point]:
        for x, y in zip(self.xs.tolist(), self.ys.tolist()):
            yield Point(x, y)

    def vertices(self) -> list[Point]:
        return list(self)

    def to_pointset(self) -> PointSet:
        return PointSet(self.xs.copy(), self.ys.copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, HullPolygon):
            return NotImplemented
        return (self.xs.view(np.int64).tobytes() == other.xs.view(np.int64).tobytes()
                and self.ys.view(np.int64).tobytes() == other.ys.view(np.int64).tobytes())


def split_budget(budget: int, sizes: tuple[int, int]) -> tuple[int, int]:
    """Divide ``budget`` workers between the two sides in proportion to their sizes.

    A nonempty side gets at least one worker when there are two or more; an
    empty side gets none.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    s1, s2 = sizes
    if s1 == 0:
        return 0, budget
    if s2 == 0:
        return budget, 0
    t1 = int(np.floor(budget * s1 / (s1 + s2) + 0.5))
    low = 1 if budget >= 2 else 0
    high = budget - 1
    t1 = min(max(t1, low), high)
    return t1, budget - t1


class _Run:
    def __init__(self, points: PointSet, cfg: HullConfig, probe: HullProbe | None, kernels):
        self.xs = points.xs
        self.ys = points.ys
        self.points = points
        self.cfg = cfg
        self.kernels = kernels
        self.probe = probe
        self.trace = probe is not None and probe.trace
        self.counters = new_counters()
        self.stats = new_stats()
        self.records: list = []
        self.lock = threading.Lock()

    def _merge(self, counters, stats, records):
        with self.lock:
            self.counters += counters
            self.stats += stats
            if records:
                self.records.extend(records)

    def recurse(self, lo: int, hi: int, p, r, q, budget: int, depth: int, top: bool = False) -> int:
        """Hull chain of ``[lo, hi)`` for the edge pair ``p -> r -> q``; returns its length."""
        n = hi - lo
        if n <= 1 and not top:
            return n
        cfg = self.cfg
        if n >= 2 and (budget <= 1 or n < cfg.parallel_cutoff or depth > cfg.max_depth):
            counters = new_counters()
            stats = new_stats()
            h, records = self.kernels.hull_chain(
                self.xs, self.ys, lo, hi, p, r, q, cfg.lanes, cfg.write_combining, cfg.debug,
                counters, stats, self.trace,
            )
            self._merge(counters, stats, records)
            return h

        counters = new_counters()
        edge_a = DirectedEdge(p, r)
        edge_b = DirectedEdge(r, q)
        if budget >= 2:
            out = parallel_extract(
                self.points, edge_a, edge_b, WorkerLayout(budget, cfg.block_size),
                cfg.lane_config, lo, hi, debug=cfg.debug, counters=counters,
                backend=self.kernels,
            )
            w_l, w_r, r1, r2 = out.w_l, out.w_r, out.r1, out.r2
        else:
            w_l, w_r, r1, r2 = self.kernels.extract(
                self.xs, self.ys, lo, hi, edge_pair(edge_a, edge_b), cfg.lanes,
                cfg.write_combining, cfg.debug, counters,
            )
        k1 = w_l
        k2 = n - w_r
        t1, t2 = split_budget(max(budget, 1), (k1, k2))
        results = {}

        def left():
            results[1] = self.recurse(lo, lo + k1, p, tuple(r1), r, max(t1, 1), depth + 1) if k1 else 0

        def right():
            results[2] = self.recurse(lo + w_r, hi, r, tuple(r2), q, max(t2, 1), depth + 1) if k2 else 0

        if t1 >= 1 and t2 >= 1 and k1 and k2 and budget >= 2:
            worker = threading.Thread(target=right)
            worker.start()
            left()
            worker.join()
            if 2 not in results:
                raise RuntimeError("right subtree failed")
        else:
            left()
            right()
        h1, h2 = results[1], results[2]

        xs, ys = self.xs, self.ys
        xs[lo + h1] = r[0]
        ys[lo + h1] = r[1]
        src = lo + w_r
        dst = lo + h1 + 1
        xs[dst:dst + h2] = xs[src:src + h2].copy()
        ys[dst:dst + h2] = ys[src:src + h2].copy()
        counters[MOVES] += h2
        counters[OVERHEAD] += 1
        stats = new_stats()
        stats[CALLS] = 1
        stats[SUM_P] = n
        stats[SUM_S1] = k1
        stats[SUM_S2] = k2
        stats[SUM_CH2] = h2
        self._merge(counters, stats, [(n, k1, k2, h2)] if self.trace else None)
        return h1 + 1 + h2


def convex_hull(points: PointSet, workers: int = 1, config: HullConfig | None = None, *,
                in_place: bool = False, probe: HullProbe | None = None,
                backend=None) -> HullPolygon:
    """Convex hull of ``points`` in clockwise order from the leftmost point.

    Points on the interior of a hull edge are not vertices. The input is
    permuted when ``in_place`` is set and left untouched otherwise.
    """
    cfg = config or HullConfig()
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    kernels = get_backend(backend)
    P = points if in_place else points.copy()
    n = P.n
    if probe is not None:
        probe.n = n
    if n == 0:
        return HullPolygon.empty()
    run = _Run(P, cfg, probe, kernels)
    il, ir = kernels.extremes(P.xs, P.ys, run.counters)
    p = (float(P.xs[il]), float(P.ys[il]))
    q = (float(P.xs[ir]), float(P.ys[ir]))

    # bootstrap with the degenerate triangle p -> q -> p
    h = run.recurse(0, n, p, q, p, workers, 0, top=True)
    if p == q:
        hx, hy = np.array([p[0]]), np.array([p[1]])
    else:
        hx = np.concatenate([[p[0]], P.xs[:h]])
        hy = np.concatenate([[p[1]], P.ys[:h]])

    if probe is not None:
        probe.counters += run.counters
        probe.stats += run.stats
        probe.records.extend(run.records)
    return HullPolygon(hx, hy)


def hull_indices(xs, ys, workers: int = 1, config: HullConfig | None = None,
                 backend=None) -> np.ndarray:
    """Flat-array entry point: coordinate arrays in, hull vertex indices out.

    Each vertex maps to the first input index holding its exact coordinates.
    """
    P = PointSet(np.array(xs, dtype=np.float64), np.array(ys, dtype=np.float64))
    hull = convex_hull(P, workers, config, backend=backend)
    if hull.h == 0:
        return np.empty(0, dtype=np.int64)
    xb = P.xs.view(np.int64)
    yb = P.ys.view(np.int64)
    hxb = hull.xs.view(np.int64)
    hyb = hull.ys.view(np.int64)
    wanted = {(int(a), int(b)): k for k, (a, b) in enumerate(zip(hxb.tolist(), hyb.tolist()))}
    out = np.full(hull.h, -1, dtype=np.int64)
    for i in np.flatnonzero(np.isin(xb, hxb)).tolist():
        k = wanted.get((int(xb[i]), int(yb[i])))
        if k is not None and out[k] < 0:
            out[k] = i
    return out
