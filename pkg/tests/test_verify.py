import numpy as np

from vqhull import HullPolygon, PointSet, convex_hull
from vqhull.datasets import gen_disk
from vqhull.verify import in_exactness_envelope, monotone_chain, verify_hull

SQUARE = PointSet.from_points([(0, 0), (1, 1), (0.5, 0.5), (1, 0), (0, 1)])


def poly(pts):
    a = np.array(pts, dtype=float).reshape(-1, 2)
    return HullPolygon(a[:, 0].copy(), a[:, 1].copy())


def test_monotone_chain_basics():
    assert monotone_chain([]) == []
    assert monotone_chain([(1, 1), (1, 1)]) == [(1.0, 1.0)]
    assert monotone_chain([(0, 0), (2, 2), (1, 1)]) == [(0.0, 0.0), (2.0, 2.0)]
    assert monotone_chain([(0, 0), (1, 0), (0, 1), (1, 1), (0, 0.5)]) == [
        (0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]


def test_monotone_chain_handles_fractions():
    pts = [(0.1, 0.1), (0.3, 0.3), (0.2, 0.2000000001), (0.2, 0.1)]
    assert monotone_chain(pts) == [(0.1, 0.1), (0.2, 0.2000000001), (0.3, 0.3), (0.2, 0.1)]


def test_square_passes():
    report = verify_hull(SQUARE, poly([(0, 0), (0, 1), (1, 1), (1, 0)]), oracle=True)
    assert report.ok, report.message
    assert report.checks["oracle"]
    assert "verdict: pass" in str(report)


def test_injected_interior_point_is_named():
    report = verify_hull(SQUARE, poly([(0, 0), (0, 1), (0.5, 0.5), (1, 1), (1, 0)]))
    assert not report.ok
    assert "vertex 2 (0.5, 0.5)" in report.message


def test_each_check_can_fail():
    cases = {
        "membership": [(0, 0), (0, 1), (1, 1), (1, 0), (0.7, -0.1)],
        "distinct": [(0, 0), (0, 1), (1, 1), (1, 0), (1, 0)],
        "leftmost_start": [(0, 1), (1, 1), (1, 0), (0, 0)],
        "clockwise_convex": [(0, 0), (1, 0), (1, 1), (0, 1)],
        "containment": [(0, 0), (0, 1), (1, 1)],
    }
    for check, pts in cases.items():
        report = verify_hull(SQUARE, poly(pts))
        assert not report.checks[check], check


def test_degenerate_sizes():
    assert verify_hull(PointSet.empty(), HullPolygon.empty()).ok
    one = PointSet(np.full(3, 2.0), np.full(3, 2.0))
    assert verify_hull(one, poly([(2, 2)])).ok
    line = PointSet.from_points([(0, 0), (1, 1), (3, 3)])
    assert verify_hull(line, poly([(0, 0), (3, 3)])).ok
    assert not verify_hull(line, poly([(0, 0), (1, 1)])).ok
    assert not verify_hull(SQUARE, HullPolygon.empty()).ok


def test_large_hull_path():
    # enough points that containment uses the chain lookup
    P = gen_disk(200_000, 8)
    hull = convex_hull(P)
    assert verify_hull(P, hull).ok
    outside = PointSet(np.append(P.xs, 0.0), np.append(P.ys, -1.5))
    assert not verify_hull(outside, hull).checks["containment"]
    assert not in_exactness_envelope(P)
