import numpy as np
import pytest

from vqhull import HullConfig, HullProbe, PointSet, TrafficModel, bytes_model, convex_hull
from vqhull.datasets import generate

from conftest import random_int_points


def test_identical_points_cost_16n(backend):
    n = 1000
    probe = HullProbe(trace=True)
    convex_hull(PointSet(np.ones(n), np.ones(n)), probe=probe, backend=backend)
    model = probe.traffic()
    assert model.records == [(n, 0, 0, 0)]
    assert bytes_model(model) == 16 * n == probe.instrumented_bytes


def test_formula_by_hand():
    model = TrafficModel.from_records(10, [(10, 4, 3, 1), (4, 1, 0, 0), (3, 0, 1, 0)])
    assert model.calls == 3
    assert bytes_model(model) == 8 * 10 + 8 * (10 + 4 + 3 + 1) + 8 * (4 + 1) + 8 * (3 + 1)
    summed = TrafficModel(10, [], 3, 17, 5, 4, 1)
    assert bytes_model(summed) == bytes_model(model)


@pytest.mark.parametrize("T", [1, 3])
def test_model_equals_counters(backend, rng, T):
    cfg = HullConfig(parallel_cutoff=0, block_size=8)
    for kind in ("disk", "kuzmin", "circle"):
        P = generate(kind, 4000, int(rng.integers(1 << 30)))
        probe = HullProbe(trace=True)
        convex_hull(P, T, cfg, probe=probe, backend=backend)
        assert bytes_model(probe.traffic()) == probe.instrumented_bytes
    xs, ys = random_int_points(rng, 3000, 30)
    probe = HullProbe()
    convex_hull(PointSet(xs, ys), T, cfg, probe=probe, backend=backend)
    assert bytes_model(probe.traffic()) == probe.instrumented_bytes


def test_disk_10k_traced_and_summed_agree(backend):
    P = generate("disk", 10_000, 11)
    traced, summed = HullProbe(trace=True), HullProbe()
    convex_hull(P, probe=traced, backend=backend)
    convex_hull(P, probe=summed, backend=backend)
    assert bytes_model(traced.traffic()) == bytes_model(summed.traffic())
    assert traced.traffic().calls == summed.traffic().calls
    # every call sees fewer points than its parent, so work per level is at most n
    assert all(s1 + s2 < p for p, s1, s2, _ in traced.traffic().records)
