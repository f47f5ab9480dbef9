"""Library configuration and its environment overrides."""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .extract import LaneConfig
from .parallel import DEFAULT_BLOCK, WorkerLayout

ENV_WORKERS = "VQHULL_WORKERS"
ENV_LANES = "VQHULL_LANES"
ENV_BLOCK = "VQHULL_BLOCK"


@dataclass(frozen=True)
class HullConfig:
    """Knobs for :func:`~vqhull.hull.convex_hull`.

    ``parallel_cutoff`` is the smallest range that is still split over
    several workers; smaller ranges use the sequential kernel. Beyond
    ``max_depth`` levels of the fork-join recursion the remaining subtree is
    finished by the sequential kernel, which keeps an explicit stack.
    """

    lanes: int = 8
    block_size: int = DEFAULT_BLOCK
    write_combining: bool = False
    parallel_cutoff: int = 1 << 16
    max_depth: int = 512
    debug: bool = False

    def __post_init__(self):
        LaneConfig(self.lanes)
        WorkerLayout(1, self.block_size)
        if self.parallel_cutoff < 0 or self.max_depth < 0:
            raise ValueError("parallel_cutoff and max_depth must be >= 0")

    @property
    def lane_config(self) -> LaneConfig:
        return LaneConfig(self.lanes, self.write_combining)

    def with_overrides(self, **changes) -> "HullConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


def env_workers() -> int | None:
    return _env_int(ENV_WORKERS)


def config_from_env(base: HullConfig | None = None) -> HullConfig:
    """Apply ``VQHULL_LANES`` and ``VQHULL_BLOCK`` on top of ``base``."""
    base = base or HullConfig()
    return base.with_overrides(lanes=_env_int(ENV_LANES), block_size=_env_int(ENV_BLOCK))
