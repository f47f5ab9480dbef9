"""Byte accounting for a hull run.

The model charges 8 bytes per point for the extremes pass over the input,
``8 (|P| + |S1| + |S2|)`` for every partition and ``8 |CH(S2)|`` for moving
the second chain next to the first. :class:`HullProbe` collects both the
per-call sizes the model needs and independent element counters incremented
inside the kernels, so the two can be compared.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import (
    CALLS, EXTREME_READS, MOVES, READS, SUM_CH2, SUM_P, SUM_S1, SUM_S2, WRITES,
    new_counters, new_stats,
)

BYTES_PER_ELEMENT = 8


@dataclass
class TrafficModel:
    """Per-call records ``(|P|, |S1|, |S2|, |CH(S2)|)`` plus their running sums."""

    n: int
    records: list[tuple[int, int, int, int]] = field(default_factory=list)
    calls: int = 0
    sum_points: int = 0
    sum_s1: int = 0
    sum_s2: int = 0
    sum_chain2: int = 0

    @classmethod
    def from_records(cls, n: int, records) -> "TrafficModel":
        records = [tuple(int(v) for v in r) for r in records]
        return cls(
            n, records, len(records),
            sum(r[0] for r in records), sum(r[1] for r in records),
            sum(r[2] for r in records), sum(r[3] for r in records),
        )

    @property
    def total_bytes(self) -> int:
        return bytes_model(self)


def bytes_model(trace: TrafficModel) -> int:
    if trace.records:
        body = sum(P + s1 + s2 + ch2 for P, s1, s2, ch2 in trace.records)
    else:
        body = trace.sum_points + trace.sum_s1 + trace.sum_s2 + trace.sum_chain2
    return BYTES_PER_ELEMENT * (trace.n + body)


@dataclass
class HullProbe:
    """Instrumentation sink passed to :func:`~vqhull.hull.convex_hull`.

    ``counters`` hold element reads, writes and chain moves counted inside the
    kernels; ``stats`` and ``records`` hold the partition sizes.
    """

    trace: bool = False
    n: int = 0
    counters: np.ndarray = field(default_factory=new_counters)
    stats: np.ndarray = field(default_factory=new_stats)
    records: list = field(default_factory=list)

    def traffic(self) -> TrafficModel:
        if self.trace:
            model = TrafficModel.from_records(self.n, self.records)
            if model.calls != int(self.stats[CALLS]):
                raise RuntimeError("trace records and call statistics disagree")
            return model
        s = self.stats
        return TrafficModel(self.n, [], int(s[CALLS]), int(s[SUM_P]), int(s[SUM_S1]),
                            int(s[SUM_S2]), int(s[SUM_CH2]))

    @property
    def instrumented_bytes(self) -> int:
        c = self.counters
        return BYTES_PER_ELEMENT * int(c[EXTREME_READS] + c[READS] + c[WRITES] + c[MOVES])
