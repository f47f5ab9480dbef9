"""Single-worker in-place extraction of the two outer subsets.

Given edges ``A`` and ``B``, a range of points is permuted so that the points
strictly left of ``A`` form a prefix (S1) and the points strictly left of
``B`` (and not of ``A``) form a suffix (S2). Everything else is dropped. The
farthest point of each subset is found in the same pass.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._backend import get_backend
from .geometry import DirectedEdge, Point, PointSet

LANE_WIDTHS = (2, 4, 8)


@dataclass(frozen=True)
class LaneConfig:
    """Lanes per block and the write-combining toggle."""

    d: int = 8
    write_combining: bool = False

    def __post_init__(self):
        if self.d not in LANE_WIDTHS:
            raise ValueError(f"lane width must be one of {LANE_WIDTHS}, got {self.d}")


@dataclass(frozen=True)
class ExtractOutcome:
    """Cursors (relative to the start of the range) and farthest points.

    ``[0, w_l)`` holds S1 and ``[w_r, n)`` holds S2; the slots in between are
    undefined.
    """

    w_l: int
    w_r: int
    r1: Optional[Point]
    r2: Optional[Point]

    @classmethod
    def from_raw(cls, raw) -> "ExtractOutcome":
        w_l, w_r, r1, r2 = raw
        return cls(
            int(w_l), int(w_r),
            Point(*r1) if r1 is not None else None,
            Point(*r2) if r2 is not None else None,
        )


def edge_pair(edge_a: DirectedEdge, edge_b: DirectedEdge) -> tuple:
    (ax, ay), (bx, by) = edge_a
    (cx, cy), (dx, dy) = edge_b
    return (float(ax), float(ay), float(bx), float(by), float(cx), float(cy), float(dx), float(dy))


def compress_select(xs_block: Sequence[float], ys_block: Sequence[float], mask: int,
                    backend=None) -> tuple[int, list, list]:
    """Move the points of the selected lanes to the front, keeping lane order.

    Lane ``i`` is selected when bit ``i`` of ``mask`` is set. Returns the
    count ``k`` and the ``k`` compacted x and y coordinates.
    """
    kernels = get_backend(backend)
    d = len(xs_block)
    k, xs_out = kernels.compress_select(list(xs_block), mask, d)
    _, ys_out = kernels.compress_select(list(ys_block), mask, d)
    return k, xs_out, ys_out


def classify_block(xs_block, ys_block, edge_a: DirectedEdge, edge_b: DirectedEdge,
                   backend=None) -> tuple[int, int]:
    """Lane masks for S1 and S2; a lane left of both edges counts only for S1."""
    return get_backend(backend).classify_block(
        [float(x) for x in xs_block], [float(y) for y in ys_block], edge_pair(edge_a, edge_b)
    )


def extract_subsets(points: PointSet, edge_a: DirectedEdge, edge_b: DirectedEdge,
                    cfg: LaneConfig = LaneConfig(), lo: int = 0, hi: int | None = None, *,
                    debug: bool = False, counters: np.ndarray | None = None,
                    iters: np.ndarray | None = None, backend=None) -> ExtractOutcome:
    """Extract S1 (left of ``edge_a``) and S2 (left of ``edge_b``) in place.

    Operates on ``points[lo:hi]``. With ``debug`` the four loop invariants
    are asserted on every iteration and
    :class:`~vqhull.errors.InvariantViolation` is raised on the first failure;
    ``iters`` (a one-element int64 array) accumulates the number of checks.
    """
    hi = points.n if hi is None else hi
    raw = get_backend(backend).extract(
        points.xs, points.ys, lo, hi, edge_pair(edge_a, edge_b),
        cfg.d, cfg.write_combining, debug, counters, iters,
    )
    return ExtractOutcome.from_raw(raw)


def scalar_partition(points: PointSet, edge_a: DirectedEdge, edge_b: DirectedEdge,
                     lo: int = 0, hi: int | None = None, *, counters=None,
                     backend=None) -> ExtractOutcome:
    """Branch-based one-point-at-a-time three-way partition, for comparison."""
    hi = points.n if hi is None else hi
    raw = get_backend(backend).scalar_partition(
        points.xs, points.ys, lo, hi, edge_pair(edge_a, edge_b), counters
    )
    return ExtractOutcome.from_raw(raw)
