from collections import Counter

import numpy as np
import pytest

from vqhull import (
    DirectedEdge, InvariantViolation, LaneConfig, Point, PointSet, classify_block,
    compress_select, extract_subsets,
)
from vqhull.extract import scalar_partition

from conftest import dist_key, random_int_points, three_way

EA = DirectedEdge((0.0, 0.0), (4.0, 0.0))
EB = EA.reversed()


def check_outcome(out, before, after, ea, eb):
    s1, s2 = three_way(before.xs, before.ys, ea, eb)
    assert out.w_l == len(s1)
    assert out.w_r == before.n - len(s2)
    got1 = list(zip(after.xs[:out.w_l].tolist(), after.ys[:out.w_l].tolist()))
    got2 = list(zip(after.xs[out.w_r:].tolist(), after.ys[out.w_r:].tolist()))
    assert Counter(got1) == Counter(s1)
    assert Counter(got2) == Counter(s2)
    for r, subset, e in ((out.r1, s1, ea), (out.r2, s2, eb)):
        if not subset:
            assert r is None
            continue
        assert tuple(r) in subset
        assert dist_key(r, *e) == max(dist_key(u, *e) for u in subset)


def test_compress_select_examples(backend):
    xs, ys = [0.0, 1.0, 2.0, 3.0], [10.0, 11.0, 12.0, 13.0]
    assert compress_select(xs, ys, 0b0110, backend) == (2, [1.0, 2.0], [11.0, 12.0])
    assert compress_select(xs, ys, 0b1111, backend) == (4, xs, ys)
    assert compress_select(xs, ys, 0, backend) == (0, [], [])


def test_classify_block_examples(backend):
    xs = [0.0, 0.0, 0.5, 0.2]
    ys = [1.0, -1.0, 0.0, 3.0]
    x_axis = DirectedEdge((0.0, 0.0), (1.0, 0.0))
    assert classify_block(xs, ys, x_axis, x_axis.reversed(), backend) == (0b1001, 0b0010)
    assert classify_block([0.25, 2.0], [0.0, 0.0], x_axis, x_axis.reversed(), backend) == (0, 0)
    # (0.5, 1) is left of both edges and must land in the first mask only
    up = DirectedEdge((1.0, 0.0), (1.0, 1.0))
    assert classify_block([0.5], [1.0], x_axis, up, backend) == (1, 0)


def test_extract_empty(backend):
    out = extract_subsets(PointSet.empty(), EA, EB, backend=backend)
    assert (out.w_l, out.w_r, out.r1, out.r2) == (0, 0, None, None)


def test_extract_single_sided(backend):
    P = PointSet(np.arange(20.0), np.arange(1.0, 21.0))
    out = extract_subsets(P, EA, EB, backend=backend)
    assert (out.w_l, out.w_r, out.r2) == (20, 20, None)
    assert out.r1 == Point(19.0, 20.0)


def test_extract_eight_points(backend):
    pts = [(1, 2), (2, -1), (3, 5), (0.5, 0), (2, -4), (1, 1), (3, -2), (6, 3)]
    P = PointSet.from_points(pts)
    before = P.copy()
    for d in (2, 4, 8):
        P = before.copy()
        out = extract_subsets(P, EA, EB, LaneConfig(d), backend=backend)
        check_outcome(out, before, P, EA, EB)
        assert out.r1 == Point(3.0, 5.0) and out.r2 == Point(2.0, -4.0)


@pytest.mark.parametrize("d", [2, 4, 8])
@pytest.mark.parametrize("wc", [False, True])
def test_extract_matches_three_way_oracle(backend, rng, d, wc):
    for _ in range(40):
        n = int(rng.integers(0, 200))
        xs, ys = random_int_points(rng, n, 30)
        before = PointSet(xs, ys)
        P = before.copy()
        pts = rng.integers(-30, 31, (3, 2)).astype(float)
        ea, eb = DirectedEdge(pts[0], pts[1]), DirectedEdge(pts[1], pts[2])
        out = extract_subsets(P, ea, eb, LaneConfig(d, wc), backend=backend)
        check_outcome(out, before, P, ea, eb)


def test_write_combining_is_invisible(backend, rng):
    xs, ys = random_int_points(rng, 5000, 1000)
    plain, staged = PointSet(xs.copy(), ys.copy()), PointSet(xs.copy(), ys.copy())
    a = extract_subsets(plain, EA, EB, LaneConfig(8, False), backend=backend)
    b = extract_subsets(staged, EA, EB, LaneConfig(8, True), backend=backend)
    assert a == b
    assert np.array_equal(plain.xs[:a.w_l], staged.xs[:b.w_l])
    assert np.array_equal(plain.ys[a.w_r:], staged.ys[b.w_r:])


def test_extract_subrange_leaves_rest_alone(backend, rng):
    xs, ys = random_int_points(rng, 300, 50)
    P = PointSet(xs.copy(), ys.copy())
    out = extract_subsets(P, EA, EB, lo=40, hi=250, backend=backend)
    assert np.array_equal(P.xs[:40], xs[:40]) and np.array_equal(P.xs[250:], xs[250:])
    check_outcome(out, PointSet(xs[40:250], ys[40:250]), PointSet(P.xs[40:250], P.ys[40:250]),
                  EA, EB)


def test_debug_mode_counts_iterations(backend, rng):
    xs, ys = random_int_points(rng, 1000, 100)
    iters = np.zeros(1, dtype=np.int64)
    extract_subsets(PointSet(xs, ys), EA, EB, LaneConfig(4), debug=True, iters=iters,
                    backend=backend)
    # one check per loop iteration plus one at exit
    assert iters[0] == -(-(1000 - 8) // 4) + 1


def test_scalar_partition_agrees(backend, rng):
    xs, ys = random_int_points(rng, 777, 40)
    a, b = PointSet(xs.copy(), ys.copy()), PointSet(xs.copy(), ys.copy())
    out_v = extract_subsets(a, EA, EB, backend=backend)
    out_s = scalar_partition(b, EA, EB, backend=backend)
    assert (out_v.w_l, out_v.w_r) == (out_s.w_l, out_s.w_r)
    check_outcome(out_s, PointSet(xs, ys), b, EA, EB)


def test_counters(backend, rng):
    xs, ys = random_int_points(rng, 500, 40)
    counters = np.zeros(5, dtype=np.int64)
    out = extract_subsets(PointSet(xs, ys), EA, EB, counters=counters, backend=backend)
    assert counters[0] == 500
    assert counters[1] == out.w_l + (500 - out.w_r)


def test_lane_config_validation():
    with pytest.raises(ValueError):
        LaneConfig(3)


def test_invariant_violation_is_an_assertion():
    assert issubclass(InvariantViolation, AssertionError)
