"""Planar points, directed edges and the two orientation predicates.

Both predicates use the plain double-precision expressions without any
adaptive refinement. They are error-free when every coordinate is an
integer of magnitude below 2**25, because all intermediate differences and
products are then exactly representable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import EmptyInputError

#: Largest integer magnitude (exclusive) for which the predicates are exact.
EXACT_COORD_LIMIT = 2**25


class Point(NamedTuple):
    x: float
    y: float


class DirectedEdge(NamedTuple):
    """Ordered pair ``p -> q``; ``p == q`` is allowed."""

    p: Point
    q: Point

    def reversed(self) -> "DirectedEdge":
        return DirectedEdge(self.q, self.p)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p[0], self.p[1], self.q[0], self.q[1])


def edge(p, q) -> DirectedEdge:
    return DirectedEdge(Point(float(p[0]), float(p[1])), Point(float(q[0]), float(q[1])))


@dataclass
class PointSet:
    """Structure-of-arrays point container (separate x and y arrays)."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        self.xs = np.ascontiguousarray(self.xs, dtype=np.float64)
        self.ys = np.ascontiguousarray(self.ys, dtype=np.float64)
        if self.xs.ndim != 1 or self.xs.shape != self.ys.shape:
            raise ValueError(
                f"coordinate arrays must be 1-d and equally long, got {self.xs.shape} and {self.ys.shape}"
            )

    @classmethod
    def from_points(cls, points: Iterable) -> "PointSet":
        arr = np.asarray(list(points), dtype=np.float64).reshape(-1, 2)
        return cls(arr[:, 0].copy(), arr[:, 1].copy())

    @classmethod
    def empty(cls) -> "PointSet":
        return cls(np.empty(0), np.empty(0))

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> Point:
        return Point(float(self.xs[i]), float(self.ys[i]))

    def __iter__(self) -> Iterator[Point]:
        for x, y in zip(self.xs.tolist(), self.ys.tolist()):
            yield Point(x, y)

    def copy(self) -> "PointSet":
        return PointSet(self.xs.copy(), self.ys.copy())

    def to_array(self) -> np.ndarray:
        """Return an ``(n, 2)`` array of the points."""
        return np.column_stack([self.xs, self.ys])

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.xs).all() and np.isfinite(self.ys).all())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return np.array_equal(self.xs, other.xs) and np.array_equal(self.ys, other.ys)


def is_left_of(u, e) -> bool:
    """True iff ``u`` lies strictly left of the directed edge ``e``.

    Collinear points (including ``u == p`` or ``u == q``) are not left.
    """
    (px, py), (qx, qy) = e
    ux, uy = u
    return (px - ux) * (qy - uy) > (py - uy) * (qx - ux)


def is_farther(u, u_prime, e) -> bool:
    """True iff ``u`` is strictly farther than ``u_prime`` to the left of ``e``."""
    (px, py), (qx, qy) = e
    return (qy - py) * (u[0] - u_prime[0]) < (qx - px) * (u[1] - u_prime[1])


def find_extremes(points: PointSet) -> tuple[int, int]:
    """Indices of the leftmost and rightmost points.

    Ties on x are broken by the smallest y for the leftmost point and the
    largest y for the rightmost point; remaining ties go to the lowest index.
    """
    from ._backend import get_backend

    if points.n == 0:
        raise EmptyInputError("empty input: find_extremes needs at least one point")
    return get_backend().extremes(points.xs, points.ys, None)
