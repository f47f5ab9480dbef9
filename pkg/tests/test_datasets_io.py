from pathlib import Path

import numpy as np
import pytest

from vqhull import PointFormatError, PointSet
from vqhull import datasets
from vqhull.datasets import DatasetSpec, gen_circle, gen_disk, gen_kuzmin, generate
from vqhull.pointio import read_points, sniff_format, write_points

DATA = Path(__file__).parent / "data"


@pytest.mark.parametrize("kind", datasets.KINDS)
def test_empty_and_deterministic(kind):
    assert generate(kind, 0, 5).n == 0
    assert generate(kind, 1000, 5) == generate(kind, 1000, 5)
    assert generate(kind, 1000, 5) != generate(kind, 1000, 6)


@pytest.mark.parametrize("kind", datasets.KINDS)
def test_shards_concatenate(kind):
    whole = generate(kind, 1001, 9)
    parts = [generate(kind, 333, 9, 0), generate(kind, 334, 9, 333), generate(kind, 334, 9, 667)]
    assert np.array_equal(np.concatenate([p.xs for p in parts]), whole.xs)
    assert np.array_equal(np.concatenate([p.ys for p in parts]), whole.ys)


def test_chunked_generation_matches(monkeypatch):
    direct = gen_kuzmin(5000, 2)
    monkeypatch.setattr(datasets, "CHUNK", 777)
    assert generate("kuzmin", 5000, 2) == direct


def test_golden_disk():
    golden = read_points(DATA / "disk_n4_seed42.bin")
    assert gen_disk(4, 42) == golden
    assert read_points(DATA / "disk_n4_seed42.txt") == golden


def test_disk_area_fraction():
    P = gen_disk(10**6, 1)
    frac = np.mean(np.hypot(P.xs, P.ys) <= 0.5)
    sigma = np.sqrt(0.25 * 0.75 / 10**6)
    assert abs(frac - 0.25) < 3 * sigma
    assert np.hypot(P.xs, P.ys).max() <= 1.0


def test_circle_is_on_unit_circle():
    P = gen_circle(10**4, 3)
    assert np.allclose(np.hypot(P.xs, P.ys), 1.0, atol=1e-15, rtol=0)


def test_kuzmin_median_radius():
    r = np.hypot(*gen_kuzmin(10**6, 4).to_array().T)
    # F(r) = 1 - (1 + r^2)^(-1/2) has median sqrt(3); density there is about 0.16
    se = 0.5 / (0.162 * np.sqrt(10**6))
    assert abs(np.median(r) - np.sqrt(3)) < 4 * se


def test_spec_validation():
    with pytest.raises(ValueError):
        DatasetSpec("gauss", 10)
    with pytest.raises(ValueError):
        DatasetSpec("disk", -1)


@pytest.mark.parametrize("fmt", ["text", "binary"])
@pytest.mark.parametrize("kind", datasets.KINDS)
def test_round_trip_is_byte_identical(tmp_path, fmt, kind):
    P = generate(kind, 257, 13)
    a, b = tmp_path / "a", tmp_path / "b"
    write_points(a, P, fmt)
    Q = read_points(a)
    write_points(b, Q, fmt)
    assert Q == P
    assert a.read_bytes() == b.read_bytes()
    assert sniff_format(a) == fmt


def test_empty_round_trip(tmp_path):
    for fmt in ("text", "binary"):
        write_points(tmp_path / fmt, PointSet.empty(), fmt)
        assert read_points(tmp_path / fmt).n == 0


@pytest.mark.parametrize("content, why", [
    (b"hello\n1 2\n", "header"),
    (b"pbbs_sequencePoint2d\n1 2\n3\n", "odd"),
    (b"pbbs_sequencePoint2d\n1 two\n", "malformed"),
    (b"pbbs_sequencePoint2d\n1 nan\n", "non-finite"),
    (b"VQH1\x05\x00\x00\x00\x00\x00\x00\x00" + b"\x00" * 16, "announces"),
    (b"VQH1\x01", "truncated"),
    (b"\xff\xfe\x00", "text"),
])
def test_bad_files(tmp_path, content, why):
    path = tmp_path / "bad"
    path.write_bytes(content)
    with pytest.raises(PointFormatError, match=why):
        read_points(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_points(tmp_path / "nope")


def test_refuses_to_write_non_finite(tmp_path):
    with pytest.raises(PointFormatError):
        write_points(tmp_path / "x", PointSet(np.array([np.inf]), np.array([0.0])))
