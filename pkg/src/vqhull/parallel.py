"""Multi-worker subset extraction over a block-cyclic layout.

Each worker runs the single-worker extraction on its own blocks and marks the
slots it leaves undefined with NaN. Only the windows between the smallest and
largest per-worker cursors can then hold misplaced points; a sequential
three-way pass over those windows finishes the job.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._backend import READS, WRITES, OVERHEAD, get_backend, new_counters
from .extract import ExtractOutcome, LaneConfig, edge_pair
from .geometry import DirectedEdge, Point, PointSet, is_farther, is_left_of

#: points per 64-byte cacheline of one coordinate array
CACHELINE_POINTS = 8
DEFAULT_BLOCK = 512


@dataclass(frozen=True)
class WorkerLayout:
    T: int
    b: int = DEFAULT_BLOCK
    n: int = 0

    def __post_init__(self):
        if self.T < 1:
            raise ValueError(f"worker count must be >= 1, got {self.T}")
        if self.b < CACHELINE_POINTS or self.b % CACHELINE_POINTS:
            raise ValueError(
                f"block size must be a positive multiple of {CACHELINE_POINTS}, got {self.b}"
            )
        if self.n < 0:
            raise ValueError("n must be >= 0")

    def indices(self, t: int) -> list[range]:
        return block_cyclic_indices(self.n, self.T, self.b, t)

    def owner(self, i: int) -> int:
        return (i // self.b) % self.T


def block_cyclic_indices(n: int, T: int, b: int, t: int) -> list[range]:
    """Ranges owned by worker ``t``: blocks ``t, t + T, t + 2T, ...`` of size ``b``."""
    if T < 1 or b < 1 or not 0 <= t < T:
        raise ValueError(f"invalid layout T={T}, b={b}, t={t}")
    nblocks = -(-n // b)
    return [range(i * b, min((i + 1) * b, n)) for i in range(t, nblocks, T)]


@dataclass(frozen=True)
class WorkerResult:
    t: int
    count: int
    w_l: int
    w_r: int
    r1: Optional[Point]
    r2: Optional[Point]


@dataclass(frozen=True)
class MergeBounds:
    """Per-worker global cursors of the workers that own at least one point."""

    cursors: tuple[tuple[int, int], ...]

    @classmethod
    def from_results(cls, results: Sequence[WorkerResult]) -> "MergeBounds":
        return cls(tuple((r.w_l, r.w_r) for r in results if r.count > 0))

    @property
    def empty(self) -> bool:
        return not self.cursors

    @property
    def wl_min(self) -> int:
        return min(c[0] for c in self.cursors)

    @property
    def wl_max(self) -> int:
        return max(c[0] for c in self.cursors)

    @property
    def wr_min(self) -> int:
        return min(c[1] for c in self.cursors)

    @property
    def wr_max(self) -> int:
        return max(c[1] for c in self.cursors)


def worker_extract(points: PointSet, a: int, z: int, layout: WorkerLayout, t: int,
                   edge_a: DirectedEdge, edge_b: DirectedEdge, cfg: LaneConfig = LaneConfig(),
                   *, debug=False, counters=None, owner_log=None, iters=None,
                   backend=None) -> WorkerResult:
    """Run the extraction on worker ``t``'s blocks of ``[a, z)``.

    Blocks are laid out from ``a``. The returned cursors are global indices.
    """
    raw = get_backend(backend).worker_extract(
        points.xs, points.ys, a, z, layout.T, layout.b, t, edge_pair(edge_a, edge_b),
        cfg.d, cfg.write_combining, debug, counters, owner_log, iters,
    )
    count, w_l, w_r, r1, r2 = raw
    return WorkerResult(
        t, int(count), int(w_l), int(w_r),
        Point(*r1) if r1 is not None else None,
        Point(*r2) if r2 is not None else None,
    )


def _merge_farthest(candidates, e: DirectedEdge) -> Optional[Point]:
    best = None
    for c in candidates:
        if c is None:
            continue
        if best is None or is_farther(c, best, e):
            best = c
    return best


def merge_and_cleanup(points: PointSet, bounds: MergeBounds, edge_a: DirectedEdge,
                      edge_b: DirectedEdge, r1_candidates=(), r2_candidates=(), *,
                      base: int = 0, counters=None, backend=None) -> ExtractOutcome:
    """Fix the windows ``[wl_min, wl_max)`` and ``[wr_min, wr_max)``.

    Window slots are classified by the NaN sentinel and the two predicates;
    S1 slots are compacted upward from ``wl_min`` and S2 slots downward from
    ``wr_max``. Candidates for the farthest points are merged in the given
    order, the earlier one winning ties. Cursors are returned relative to
    ``base``. Raises :class:`~vqhull.errors.ExtractionError` if a window point
    belongs to neither subset.
    """
    if bounds.empty:
        w_l = w_r = base
    else:
        c1, c2 = get_backend(backend).cleanup(
            points.xs, points.ys, bounds.wl_min, bounds.wl_max, bounds.wr_min, bounds.wr_max,
            edge_pair(edge_a, edge_b), counters,
        )
        w_l = bounds.wl_min + c1
        w_r = bounds.wr_max - c2
    return ExtractOutcome(
        w_l - base, w_r - base,
        _merge_farthest(r1_candidates, edge_a),
        _merge_farthest(r2_candidates, edge_b),
    )


def _aligned_middle(lo: int, hi: int) -> tuple[int, int]:
    a = min(hi, -(-lo // CACHELINE_POINTS) * CACHELINE_POINTS)
    z = max(a, hi // CACHELINE_POINTS * CACHELINE_POINTS)
    return a, z


def parallel_extract(points: PointSet, edge_a: DirectedEdge, edge_b: DirectedEdge,
                     layout: WorkerLayout, cfg: LaneConfig = LaneConfig(), lo: int = 0,
                     hi: int | None = None, *, debug=False, counters=None, owner_log=None,
                     iters=None, backend=None) -> ExtractOutcome:
    """Multi-worker extraction of ``points[lo:hi]`` with the same contract as
    :func:`~vqhull.extract.extract_subsets`."""
    hi = points.n if hi is None else hi
    if not 0 <= lo <= hi <= points.n:
        raise IndexError("range outside the point set")
    kernels = get_backend(backend)
    xs, ys = points.xs, points.ys
    counters = new_counters() if counters is None else counters

    # the sub-cacheline head and tail go through the scalar path first
    a, z = _aligned_middle(lo, hi)
    side = list(range(lo, a)) + list(range(z, hi))
    side_s1: list[Point] = []
    side_s2: list[Point] = []
    for i in side:
        u = Point(float(xs[i]), float(ys[i]))
        if is_left_of(u, edge_a):
            side_s1.append(u)
        elif is_left_of(u, edge_b):
            side_s2.append(u)
    counters[READS] += len(side)

    T = layout.T
    local = [new_counters() for _ in range(T)]
    local_iters = [np.zeros(1, dtype=np.int64) for _ in range(T)]

    def run(t: int) -> WorkerResult:
        return worker_extract(points, a, z, layout, t, edge_a, edge_b, cfg, debug=debug,
                              counters=local[t], owner_log=owner_log, iters=local_iters[t],
                              backend=kernels)

    if T == 1:
        results = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=T) as pool:
            results = list(pool.map(run, range(T)))
    for c in local:
        counters += c
    if iters is not None:
        iters[0] += sum(int(it[0]) for it in local_iters)

    bounds = MergeBounds.from_results(results)
    mid = merge_and_cleanup(
        points, bounds, edge_a, edge_b,
        [_merge_farthest(side_s1, edge_a)] + [r.r1 for r in results],
        [_merge_farthest(side_s2, edge_b)] + [r.r2 for r in results],
        base=a, counters=counters, backend=kernels,
    )
    if bounds.empty:
        c_mid1 = c_mid2 = 0
    else:
        c_mid1 = mid.w_l
        c_mid2 = (z - a) - mid.w_r

    # slide the middle subsets out to the range ends, then place the side points
    mv = min(a - lo, c_mid1)
    if mv:
        src = a + c_mid1 - mv
        xs[lo:lo + mv] = xs[src:src + mv]
        ys[lo:lo + mv] = ys[src:src + mv]
    mv2 = min(hi - z, c_mid2)
    if mv2:
        src = z - c_mid2
        xs[hi - mv2:hi] = xs[src:src + mv2]
        ys[hi - mv2:hi] = ys[src:src + mv2]
    counters[OVERHEAD] += mv + mv2
    w_l = lo + c_mid1
    for u in side_s1:
        xs[w_l], ys[w_l] = u
        w_l += 1
    w_r = hi - c_mid2
    for u in side_s2:
        w_r -= 1
        xs[w_r], ys[w_r] = u
    counters[WRITES] += len(side_s1) + len(side_s2)
    return ExtractOutcome(w_l - lo, w_r - lo, mid.r1, mid.r2)

