import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vqhull import HullConfig, Point, PointSet, convex_hull, hull_indices, split_budget
from vqhull.datasets import gen_disk
from vqhull.verify import monotone_chain, verify_hull

from conftest import random_int_points

EAGER = HullConfig(parallel_cutoff=0, block_size=8)


def as_list(hull):
    return [tuple(v) for v in hull]


def test_single_point(backend):
    assert as_list(convex_hull(PointSet.from_points([(0, 0)]), backend=backend)) == [(0.0, 0.0)]


def test_empty(backend):
    assert convex_hull(PointSet.empty(), backend=backend).h == 0


def test_square_with_center(backend):
    P = PointSet.from_points([(1, 1), (0, 0), (0.5, 0.5), (1, 0), (0, 1)])
    assert as_list(convex_hull(P, backend=backend)) == [(0, 0), (0, 1), (1, 1), (1, 0)]


def test_collinear_keeps_endpoints(backend):
    P = PointSet.from_points([(i, i) for i in (3, 0, 9, 5, 1, 8, 2, 7, 4, 6)])
    assert as_list(convex_hull(P, backend=backend)) == [(0, 0), (9, 9)]


def test_identical_points(backend):
    P = PointSet(np.full(50, 2.5), np.full(50, -1.0))
    assert as_list(convex_hull(P, 4, EAGER, backend=backend)) == [(2.5, -1.0)]


def test_duplicates_of_extremes_are_dropped(backend):
    pts = [(0, 0)] * 5 + [(4, 0)] * 5 + [(2, 3), (2, -3), (2, 3)]
    hull = convex_hull(PointSet.from_points(pts), backend=backend)
    assert as_list(hull) == [(0, 0), (2, 3), (4, 0), (2, -3)]


def test_fan_with_empty_second_side(backend):
    # every candidate above p -> q sits left of p -> r, none left of r -> q
    pts = [(0, 0), (10, 0), (5, 10), (1, 5), (2, 7), (3, 8.5)]
    P = PointSet.from_points(pts)
    assert as_list(convex_hull(P, backend=backend)) == monotone_chain(pts)


def test_input_untouched_unless_in_place(backend, rng):
    xs, ys = random_int_points(rng, 300, 100)
    P = PointSet(xs.copy(), ys.copy())
    convex_hull(P, backend=backend)
    assert np.array_equal(P.xs, xs)
    convex_hull(P, in_place=True, backend=backend)
    assert not np.array_equal(P.xs, xs)


@pytest.mark.parametrize("T", [1, 2, 3, 8])
def test_matches_oracle_random(backend, rng, T):
    for _ in range(15):
        n = int(rng.integers(0, 600))
        xs, ys = random_int_points(rng, n, int(rng.choice([3, 50, 10**6])))
        P = PointSet(xs, ys)
        hull = convex_hull(P, T, EAGER, backend=backend)
        expected = monotone_chain(zip(xs.tolist(), ys.tolist()))
        assert as_list(hull) == expected
        assert verify_hull(P, hull).ok


coords = st.lists(st.tuples(st.integers(-40, 40), st.integers(-40, 40)), max_size=120)


@settings(max_examples=150, deadline=None)
@given(coords, st.sampled_from([1, 2, 4]), st.sampled_from([2, 4, 8]))
def test_hull_property(pts, T, lanes):
    P = PointSet.from_points(pts) if pts else PointSet.empty()
    cfg = HullConfig(lanes=lanes, parallel_cutoff=0, block_size=8, debug=True)
    hull = convex_hull(P, T, cfg)
    assert as_list(hull) == monotone_chain(pts)


def test_worker_and_lane_independence(backend):
    P = gen_disk(20_000 if backend.__name__.endswith("_kernels") else 3000, 3)
    ref = convex_hull(P, 1, backend=backend)
    for T in (2, 4, 8):
        for lanes in (2, 4, 8):
            cfg = HullConfig(lanes=lanes, parallel_cutoff=0, block_size=64)
            assert convex_hull(P, T, cfg, backend=backend) == ref


def test_debug_and_write_combining_do_not_change_output(backend):
    P = gen_disk(5000, 9)
    ref = convex_hull(P, backend=backend)
    assert convex_hull(P, 2, HullConfig(debug=True, parallel_cutoff=0, block_size=16),
                       backend=backend) == ref
    assert convex_hull(P, 1, HullConfig(write_combining=True), backend=backend) == ref


def test_depth_guard_falls_back(backend):
    P = gen_disk(4000, 5)
    ref = convex_hull(P, backend=backend)
    cfg = HullConfig(parallel_cutoff=0, max_depth=0, block_size=8)
    assert convex_hull(P, 4, cfg, backend=backend) == ref


@pytest.mark.parametrize("T, sizes, expected", [
    (8, (50, 50), (4, 4)),
    (8, (100, 0), (8, 0)),
    (4, (999999, 1), (3, 1)),
    (4, (1, 999999), (1, 3)),
    (1, (5, 5), (0, 1)),
    (2, (0, 0), (0, 2)),
])
def test_split_budget(T, sizes, expected):
    assert split_budget(T, sizes) == expected


@given(st.integers(1, 64), st.integers(0, 10**6), st.integers(0, 10**6))
def test_split_budget_properties(T, s1, s2):
    t1, t2 = split_budget(T, (s1, s2))
    assert t1 + t2 == T and t1 >= 0 and t2 >= 0
    if s1 == 0:
        assert t1 == 0
    elif s2 == 0:
        assert t2 == 0
    elif T >= 2:
        assert t1 >= 1 and t2 >= 1


def test_hull_indices(backend):
    xs = [0.0, 1.0, 0.5, 1.0, 0.0, 1.0]
    ys = [0.0, 1.0, 0.5, 0.0, 1.0, 1.0]
    idx = hull_indices(xs, ys, backend=backend)
    assert idx.tolist() == [0, 4, 1, 3]
    assert hull_indices([], [], backend=backend).tolist() == []


def test_polygon_helpers():
    hull = convex_hull(PointSet.from_points([(0, 0), (1, 0), (0, 1)]))
    assert hull.vertices() == [Point(0.0, 0.0), Point(0.0, 1.0), Point(1.0, 0.0)]
    assert len(hull) == hull.h == 3
    assert hull.to_pointset().n == 3


def test_rejects_bad_worker_count():
    with pytest.raises(ValueError):
        convex_hull(PointSet.from_points([(0, 0)]), 0)
