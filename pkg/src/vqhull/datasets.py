"""Deterministic generators for the Kuzmin, Circle and Disk benchmark inputs.

Randomness comes from the counter-based Philox4x64 generator keyed by the
seed. Point ``i`` consumes the 64-bit outputs ``2i`` and ``2i + 1`` (as
53-bit uniforms in ``[0, 1)``), so any index range can be produced on its own
and shards concatenate to exactly the single-shot output.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import PointSet

KINDS = ("kuzmin", "circle", "disk")
_OUTPUTS_PER_COUNTER = 4


@dataclass(frozen=True)
class DatasetSpec:
    kind: str
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown dataset {self.kind!r}; choose from {KINDS}")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def generate(self) -> PointSet:
        return generate(self.kind, self.n, self.seed)


def uniform_pairs(seed: int, n: int, start: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """The two uniforms of points ``start .. start + n - 1``."""
    bitgen = np.random.Philox(key=seed)
    offset = 2 * start
    bitgen.advance(offset // _OUTPUTS_PER_COUNTER)
    rng = np.random.Generator(bitgen)
    skip = offset % _OUTPUTS_PER_COUNTER
    if skip:
        rng.random(skip)
    u = rng.random(2 * n).reshape(n, 2)
    return u[:, 0].copy(), u[:, 1].copy()


def gen_disk(n: int, seed: int = 0, start: int = 0) -> PointSet:
    """Uniform on the unit disk: radius ``sqrt(u1)``, angle ``2 pi u2``."""
    u1, u2 = uniform_pairs(seed, n, start)
    r = np.sqrt(u1)
    theta = 2.0 * np.pi * u2
    return PointSet(r * np.cos(theta), r * np.sin(theta))


def gen_circle(n: int, seed: int = 0, start: int = 0) -> PointSet:
    """``(cos t, sin t)`` with ``t`` uniform in ``[0, 2 pi)``."""
    _, u2 = uniform_pairs(seed, n, start)
    theta = 2.0 * np.pi * u2
    return PointSet(np.cos(theta), np.sin(theta))


def gen_kuzmin(n: int, seed: int = 0, start: int = 0) -> PointSet:
    """Kuzmin disk: radial CDF ``1 - (1 + r^2)^(-1/2)``, uniform angle."""
    u1, u2 = uniform_pairs(seed, n, start)
    s = 1.0 / (1.0 - u1)
    r = np.sqrt(s * s - 1.0)
    theta = 2.0 * np.pi * u2
    return PointSet(r * np.cos(theta), r * np.sin(theta))


_GENERATORS = {"kuzmin": gen_kuzmin, "circle": gen_circle, "disk": gen_disk}


CHUNK = 1 << 22


def generate(kind: str, n: int, seed: int = 0, start: int = 0) -> PointSet:
    """Points ``start .. start + n - 1`` of the ``kind`` stream for ``seed``.

    Large requests are filled chunk by chunk into the output arrays, which
    keeps the temporaries small and gives the same bits as one call.
    """
    DatasetSpec(kind, n, seed)
    gen = _GENERATORS[kind]
    if n <= CHUNK:
        return gen(n, seed, start)
    xs = np.empty(n)
    ys = np.empty(n)
    for lo in range(0, n, CHUNK):
        part = gen(min(CHUNK, n - lo), seed, start + lo)
        xs[lo:lo + part.n] = part.xs
        ys[lo:lo + part.n] = part.ys
    return PointSet(xs, ys)
