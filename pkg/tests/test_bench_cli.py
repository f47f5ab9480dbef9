import io
import json

import pytest

from vqhull import HullConfig
from vqhull.bench import (
    CSV_FIELDS, BenchReport, append_csv, read_csv, run_bench, stream_scale_baseline, write_csv,
)
from vqhull.cli import main
from vqhull.config import config_from_env
from vqhull.datasets import DatasetSpec, generate
from vqhull.pointio import read_points, write_points


def test_run_bench_defaults_and_bandwidth():
    report = run_bench(DatasetSpec("disk", 20_000, 1))
    assert report.reps == 10 and len(report.times) == 10
    assert report.bandwidth == pytest.approx(report.bytes / report.mean / 1e9)
    assert report.std >= 0 and report.h > 3


def test_worker_count_does_not_change_hull():
    spec = DatasetSpec("kuzmin", 50_000, 2)
    cfg = HullConfig(parallel_cutoff=0)
    assert run_bench(spec, 1, reps=1).h == run_bench(spec, 4, reps=1, config=cfg).h


def test_bench_leaves_file_alone(tmp_path):
    path = tmp_path / "pts.bin"
    write_points(path, generate("disk", 5000, 3), "binary")
    before = path.read_bytes()
    report = run_bench(path=path, reps=2)
    assert path.read_bytes() == before
    assert report.source == str(path) and report.n == 5000


def test_csv_round_trip():
    report = run_bench(DatasetSpec("circle", 3000, 4), reps=3)
    buf = io.StringIO()
    write_csv([report, report], buf)
    rows = read_csv(buf.getvalue())
    assert len(rows) == 2 and tuple(rows[0]) == CSV_FIELDS
    assert rows[0]["energy_j"] == "" and rows[0]["idle_power_w"] == ""
    assert int(rows[0]["hull_vertices"]) == report.h
    assert float(rows[0]["bandwidth_gbs"]) == pytest.approx(report.bandwidth, rel=1e-5)
    assert json.loads(report.to_json())["times_s"] == report.times


def test_append_csv_writes_header_once(tmp_path):
    report = BenchReport(DatasetSpec("disk", 10, 0), 1, 8, 2, [0.1, 0.3], 160, 4)
    path = tmp_path / "r.csv"
    append_csv(path, [report])
    append_csv(path, [report])
    rows = read_csv(path.read_text())
    assert len(rows) == 2 and rows[1]["mean_s"] == "0.2"


def test_scale_baseline_is_positive():
    assert stream_scale_baseline(8 << 20, reps=3) > 0


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("VQHULL_LANES", "4")
    monkeypatch.setenv("VQHULL_BLOCK", "64")
    cfg = config_from_env()
    assert (cfg.lanes, cfg.block_size) == (4, 64)
    monkeypatch.setenv("VQHULL_LANES", "four")
    with pytest.raises(ValueError):
        config_from_env()


def test_cli_pipeline(tmp_path, capsys):
    d, h = str(tmp_path / "d.bin"), str(tmp_path / "h.txt")
    assert main(["gen", "--dataset", "disk", "--n", "1000", "--seed", "7", "--out", d]) == 0
    assert main(["hull", "--in", d, "--out", h]) == 0
    assert main(["verify", "--in", d, "--hull", h]) == 0
    assert main(["verify", "--in", d]) == 0
    assert "verdict: pass" in capsys.readouterr().out


def test_cli_verify_failure(tmp_path):
    d, h = tmp_path / "d.txt", tmp_path / "h.txt"
    write_points(d, generate("disk", 200, 1), "text")
    assert main(["hull", "--in", str(d), "--out", str(h)]) == 0
    hull = read_points(h)
    hull.xs[[1, 2]] = hull.xs[[2, 1]]
    hull.ys[[1, 2]] = hull.ys[[2, 1]]
    write_points(h, hull, "text")
    assert main(["verify", "--in", str(d), "--hull", str(h)]) == 1


def test_cli_bench_outputs(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("VQHULL_WORKERS", "2")
    csv_path = tmp_path / "out.csv"
    code = main(["bench", "--dataset", "kuzmin", "--n", "20000", "--reps", "2", "--lanes", "4",
                 "--csv", str(csv_path), "--json"])
    assert code == 0
    out = capsys.readouterr().out
    assert "bandwidth" in out and '"reps": 2' in out
    row = read_csv(csv_path.read_text())[0]
    assert (row["workers"], row["lanes"], row["reps"]) == ("2", "4", "2")
    # flags win over the environment
    assert main(["bench", "--dataset", "disk", "--n", "5000", "--reps", "1", "--workers", "1",
                 "--csv", "-"]) == 0
    assert "\ndisk,5000,0,,1," in capsys.readouterr().out


def test_cli_baseline(capsys):
    assert main(["baseline", "--buffer-mb", "8", "--reps", "2"]) == 0
    assert "GB/s" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["hull", "--bogus"],
    ["frobnicate"],
    [],
    ["gen", "--dataset", "disk", "--n", "10"],
    ["hull", "--in", "/nonexistent/points.bin"],
    ["hull"],
    ["bench", "--dataset", "disk", "--lanes", "3"],
])
def test_cli_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err
