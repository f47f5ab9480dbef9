"""Hull validation and an exact monotone-chain reference hull.

The reference runs on integers (or exact rationals for non-integral input),
so it is independent of floating-point rounding and of the Quickhull code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import EXACT_COORD_LIMIT, PointSet
from .hull import HullPolygon


def _exact(v: float):
    return int(v) if float(v).is_integer() else Fraction(v)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def monotone_chain(points) -> list[tuple[float, float]]:
    """Exact hull, clockwise from the leftmost-lowest point, no collinear vertices."""
    pts = sorted({(float(x), float(y)) for x, y in points})
    if len(pts) <= 2:
        return pts
    ex = [(_exact(x), _exact(y)) for x, y in pts]
    lower: list[int] = []
    for i, e in enumerate(ex):
        while len(lower) >= 2 and _cross(ex[lower[-2]], ex[lower[-1]], e) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in range(len(ex) - 1, -1, -1):
        while len(upper) >= 2 and _cross(ex[upper[-2]], ex[upper[-1]], ex[i]) <= 0:
            upper.pop()
        upper.append(i)
    ccw = lower[:-1] + upper[:-1]
    # ccw starts at the smallest (x, y); clockwise keeps that start
    cw = [ccw[0]] + ccw[:0:-1]
    return [pts[i] for i in cw]


def in_exactness_envelope(points: PointSet) -> bool:
    xs, ys = points.xs, points.ys
    if points.n == 0:
        return True
    return bool(
        np.all(np.floor(xs) == xs) and np.all(np.floor(ys) == ys)
        and np.abs(xs).max() < EXACT_COORD_LIMIT and np.abs(ys).max() < EXACT_COORD_LIMIT
    )


@dataclass
class VerifyReport:
    ok: bool
    checks: dict[str, bool] = field(default_factory=dict)
    message: str = ""

    def __str__(self) -> str:
        lines = [f"{name}: {'pass' if passed else 'FAIL'}" for name, passed in self.checks.items()]
        lines.append("verdict: " + ("pass" if self.ok else f"FAIL ({self.message})"))
        return "\n".join(lines)


_PAIR = np.dtype([("x", "<i8"), ("y", "<i8")])


def _pairs(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    # bit patterns, so -0.0 and 0.0 stay distinct like everywhere else
    out = np.empty(xs.shape[0], dtype=_PAIR)
    out["x"] = np.ascontiguousarray(xs, dtype=np.float64).view(np.int64)
    out["y"] = np.ascontiguousarray(ys, dtype=np.float64).view(np.int64)
    return out


def _left_mask(xs, ys, ax, ay, bx, by):
    return (ax - xs) * (by - ys) > (ay - ys) * (bx - xs)


def _containment_violation(points: PointSet, hull: HullPolygon):
    """First input point strictly left of some hull edge, as (point index, edge index)."""
    hx, hy = hull.xs, hull.ys
    h = hull.h
    xs, ys = points.xs, points.ys
    if h == 1:
        bad = np.flatnonzero((xs != hx[0]) | (ys != hy[0]))
        return (int(bad[0]), 0) if bad.size else None
    if h == 2 or h * points.n <= 4_000_000:
        for k in range(h):
            j = (k + 1) % h
            left = _left_mask(xs, ys, hx[k], hy[k], hx[j], hy[j])
            if left.any():
                return int(np.flatnonzero(left)[0]), k
        if h == 2:
            # both edge directions passed: points are on the line, check the span
            lo_x, hi_x = min(hx), max(hx)
            lo_y, hi_y = min(hy), max(hy)
            bad = np.flatnonzero((xs < lo_x) | (xs > hi_x) | (ys < lo_y) | (ys > hi_y))
            return (int(bad[0]), 0) if bad.size else None
        return None
    # large hulls: test each point against the upper and lower edge spanning its x
    k_right = int(np.argmax(hx))
    outside = np.flatnonzero((xs < hx[0]) | (xs > hx[k_right]))
    if outside.size:
        return int(outside[0]), 0
    upper = np.arange(0, k_right + 1)
    lower = np.r_[np.arange(k_right, h), 0][::-1]
    for chain, forward in ((upper, True), (lower, False)):
        cx = hx[chain]
        starts = np.flatnonzero(cx[1:] != cx[:-1])
        if starts.size == 0:
            continue
        e = np.clip(np.searchsorted(cx[starts], xs, side="right") - 1, 0, starts.size - 1)
        a = chain[starts[e]]
        b = chain[starts[e] + 1]
        if not forward:
            # the lower chain was reversed to get ascending x; edges run b -> a
            a, b = b, a
        left = _left_mask(xs, ys, hx[a], hy[a], hx[b], hy[b])
        if left.any():
            i = int(np.flatnonzero(left)[0])
            return i, int(a[i])
    return None


def verify_hull(points: PointSet, hull: HullPolygon, *, oracle: bool | None = None) -> VerifyReport:
    """Check a hull against its input.

    Checks membership, distinct vertices, the leftmost start, strict
    clockwise convexity and containment of every input point. With
    ``oracle`` (default: when coordinates are small integers) the vertex
    sequence must also equal :func:`monotone_chain`.
    """
    report = VerifyReport(ok=True)

    def fail(name: str, message: str):
        report.checks[name] = False
        if report.ok:
            report.ok = False
            report.message = message

    n, h = points.n, hull.h
    if n == 0 or h == 0:
        report.checks["nonempty"] = n == h
        if n != h:
            fail("nonempty", f"{n} input points but {h} hull vertices")
        return report

    hull_keys = _pairs(hull.xs, hull.ys)
    # only inputs sharing an x bit pattern with some vertex can match it
    near = np.flatnonzero(np.isin(points.xs.view(np.int64), hull.xs.view(np.int64)))
    input_keys = np.sort(_pairs(points.xs[near], points.ys[near]))
    pos = np.minimum(np.searchsorted(input_keys, hull_keys), max(input_keys.size - 1, 0))
    found = input_keys[pos] == hull_keys if input_keys.size else np.zeros(h, dtype=bool)
    report.checks["membership"] = True
    if not found.all():
        k = int(np.flatnonzero(~found)[0])
        fail("membership", f"vertex {k} ({float(hull.xs[k])!r}, {float(hull.ys[k])!r}) is not an input point")

    report.checks["distinct"] = True
    order = np.argsort(hull_keys, kind="stable")
    dup = np.flatnonzero(hull_keys[order][1:] == hull_keys[order][:-1])
    if dup.size:
        first, again = sorted((int(order[dup[0]]), int(order[dup[0] + 1])))
        fail("distinct", f"vertex {again} repeats vertex {first}")

    report.checks["leftmost_start"] = True
    x0 = points.xs.min()
    y0 = points.ys[points.xs == x0].min()
    if not (hull.xs[0] == x0 and hull.ys[0] == y0):
        fail("leftmost_start", f"vertex 0 ({float(hull.xs[0])!r}, {float(hull.ys[0])!r}) is not the leftmost-lowest point")

    report.checks["clockwise_convex"] = True
    if h >= 3:
        ax, ay = hull.xs, hull.ys
        bx, by = np.roll(ax, -1), np.roll(ay, -1)
        cx, cy = np.roll(ax, -2), np.roll(ay, -2)
        turn = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        bad = np.flatnonzero(~(turn < 0))
        if bad.size:
            k = (int(bad[0]) + 1) % h
            fail("clockwise_convex",
                 f"vertex {k} ({float(hull.xs[k])!r}, {float(hull.ys[k])!r}) is not a strict clockwise turn")

    report.checks["containment"] = True
    violation = _containment_violation(points, hull)
    if violation is not None:
        i, k = violation
        fail("containment",
             f"input point {i} ({float(points.xs[i])!r}, {float(points.ys[i])!r}) lies outside edge {k}")

    if oracle is None:
        oracle = in_exactness_envelope(points)
    if oracle:
        expected = monotone_chain(zip(points.xs.tolist(), points.ys.tolist()))
        got = list(zip(hull.xs.tolist(), hull.ys.tolist()))
        report.checks["oracle"] = got == expected
        if got != expected:
            k = next((k for k, (g, e) in enumerate(zip(got, expected)) if g != e),
                     min(len(got), len(expected)))
            fail("oracle", f"sequence differs from the exact reference at vertex {k} "
                           f"({len(got)} vs {len(expected)} vertices)")
    return report
