"""Timing, bandwidth and the in-place Scale baseline."""
from __future__ import annotations

import csv
import io
import json
import os
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._backend import backend_name, get_backend
from .config import HullConfig
from .datasets import DatasetSpec
from .geometry import PointSet
from .hull import convex_hull
from .pointio import read_points
from .traffic import HullProbe, bytes_model

DEFAULT_REPS = 10
CSV_FIELDS = (
    "dataset", "n", "seed", "source", "workers", "lanes", "block_size", "backend", "reps",
    "mean_s", "std_s", "min_s", "bytes", "bandwidth_gbs", "hull_vertices",
    "energy_j", "idle_power_w",
)


@dataclass
class BenchReport:
    spec: DatasetSpec | None
    workers: int
    lanes: int
    reps: int
    times: list[float]
    bytes: int
    h: int
    block_size: int = 512
    backend: str = ""
    source: str = ""
    energy_j: float | None = None
    idle_power_w: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.spec.n if self.spec else int(self.extra.get("n", 0))

    @property
    def mean(self) -> float:
        return statistics.fmean(self.times)

    @property
    def std(self) -> float:
        return statistics.stdev(self.times) if len(self.times) > 1 else 0.0

    @property
    def bandwidth(self) -> float:
        """Modelled bytes over mean wall time, in GB/s."""
        return self.bytes / self.mean / 1e9 if self.mean > 0 else float("inf")

    def row(self) -> dict:
        return {
            "dataset": self.spec.kind if self.spec else "",
            "n": self.n,
            "seed": self.spec.seed if self.spec else "",
            "source": self.source,
            "workers": self.workers,
            "lanes": self.lanes,
            "block_size": self.block_size,
            "backend": self.backend,
            "reps": self.reps,
            "mean_s": f"{self.mean:.6g}",
            "std_s": f"{self.std:.6g}",
            "min_s": f"{min(self.times):.6g}",
            "bytes": self.bytes,
            "bandwidth_gbs": f"{self.bandwidth:.6g}",
            "hull_vertices": self.h,
            "energy_j": "" if self.energy_j is None else self.energy_j,
            "idle_power_w": "" if self.idle_power_w is None else self.idle_power_w,
        }

    def to_json(self) -> str:
        rec = self.row()
        rec["times_s"] = self.times
        return json.dumps(rec, sort_keys=True)

    def table(self) -> str:
        label = f"{self.spec.kind} n={self.n} seed={self.spec.seed}" if self.spec else self.source
        lines = [
            f"dataset     {label}",
            f"workers     {self.workers}  lanes {self.lanes}  block {self.block_size}  backend {self.backend}",
            f"reps        {self.reps}",
            f"time        {self.mean:.4f} s  +/- {self.std:.4f}  (min {min(self.times):.4f})",
            f"bytes       {self.bytes} ({self.bytes / 1e9:.3f} GB)",
            f"bandwidth   {self.bandwidth:.2f} GB/s",
            f"hull        {self.h} vertices",
        ]
        return "\n".join(lines)


def write_csv(reports, fh, header: bool = True) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    if header:
        writer.writeheader()
    for rep in reports:
        writer.writerow(rep.row())


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def append_csv(path, reports) -> None:
    path = Path(path)
    fresh = not path.exists() or path.stat().st_size == 0
    with open(path, "a", newline="") as fh:
        write_csv(reports, fh, header=fresh)


def last_level_cache_bytes(default: int = 32 << 20) -> int:
    best = 0
    root = Path("/sys/devices/system/cpu/cpu0/cache")
    for idx in root.glob("index*"):
        try:
            size = (idx / "size").read_text().strip()
        except OSError:
            continue
        unit = {"K": 1 << 10, "M": 1 << 20, "G": 1 << 30}.get(size[-1:].upper(), 1)
        digits = size.rstrip("KkMmGg")
        if digits.isdigit():
            best = max(best, int(digits) * unit)
    return best or default


def stream_scale_baseline(buffer_bytes: int | None = None, reps: int = DEFAULT_REPS,
                          scalar: float = 3.0) -> float:
    """Best-of-``reps`` bandwidth of ``a[i] = s * a[i]`` in GB/s.

    The buffer defaults to four times the last-level cache. Each element
    counts 16 bytes: one read and one write of the same array.
    """
    if buffer_bytes is None:
        buffer_bytes = 4 * last_level_cache_bytes()
    n = max(1, buffer_bytes // 8)
    a = np.ones(n, dtype=np.float64)
    s = np.float64(scalar)
    inv = np.float64(1.0 / scalar)
    best = float("inf")
    for k in range(reps):
        t0 = time.perf_counter()
        np.multiply(a, s if k % 2 == 0 else inv, out=a)
        best = min(best, time.perf_counter() - t0)
    return 16 * n / best / 1e9


def run_bench(spec: DatasetSpec | None = None, workers: int = 1, lanes: int = 8,
              reps: int = DEFAULT_REPS, *, points: PointSet | None = None, path=None,
              config: HullConfig | None = None, backend=None) -> BenchReport:
    """Time ``reps`` hull runs, each on a fresh copy of the dataset.

    The dataset comes from ``points``, ``path`` or is generated from
    ``spec``. Timing covers the hull call only; loading and copying do not
    count.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    source = ""
    if points is None:
        if path is not None:
            if not os.path.exists(path):
                raise FileNotFoundError(f"dataset {path} not found")
            points = read_points(path)
            source = str(path)
        elif spec is not None:
            points = spec.generate()
        else:
            raise ValueError("need a dataset spec, a point set or a path")
    cfg = (config or HullConfig()).with_overrides(lanes=lanes)
    kernels = get_backend(backend)

    # one traced run for the model; it is not timed
    probe = HullProbe()
    hull = convex_hull(points, workers, cfg, probe=probe, backend=kernels)
    modelled = bytes_model(probe.traffic())

    times = []
    for _ in range(reps):
        work = points.copy()
        t0 = time.perf_counter()
        convex_hull(work, workers, cfg, in_place=True, backend=kernels)
        times.append(time.perf_counter() - t0)
    return BenchReport(
        spec, workers, cfg.lanes, reps, times, modelled, hull.h, cfg.block_size,
        backend_name(kernels), source,
        extra={"n": points.n},
    )

