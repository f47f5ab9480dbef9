"""Point-set file formats.

text
    A ``pbbs_sequencePoint2d`` header line, then one ``x y`` pair per line in
    shortest round-trip decimal.
binary
    ``VQH1`` magic, little-endian uint64 count ``n``, ``n`` little-endian
    float64 x coordinates, then ``n`` y coordinates.
"""
from __future__ import annotations

import os
import struct

import numpy as np

from .errors import PointFormatError
from .geometry import PointSet

TEXT_HEADER = "pbbs_sequencePoint2d"
BINARY_MAGIC = b"VQH1"
FORMATS = ("text", "binary")
_COUNT = struct.Struct("<Q")


def _check_finite(points: PointSet, where: str):
    if not points.is_finite():
        bad = int(np.flatnonzero(~(np.isfinite(points.xs) & np.isfinite(points.ys)))[0])
        raise PointFormatError(f"{where}: point {bad} has a non-finite coordinate")


def write_points(path, points: PointSet, fmt: str = "text") -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
    _check_finite(points, str(path))
    if fmt == "binary":
        with open(path, "wb") as fh:
            fh.write(BINARY_MAGIC)
            fh.write(_COUNT.pack(points.n))
            fh.write(points.xs.astype("<f8").tobytes())
            fh.write(points.ys.astype("<f8").tobytes())
        return
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(TEXT_HEADER + "\n")
        fh.writelines(
            f"{x!r} {y!r}\n" for x, y in zip(points.xs.tolist(), points.ys.tolist())
        )


def sniff_format(path) -> str:
    with open(path, "rb") as fh:
        head = fh.read(len(BINARY_MAGIC))
    return "binary" if head == BINARY_MAGIC else "text"


def _read_binary(path) -> PointSet:
    data = open(path, "rb").read()
    if data[:4] != BINARY_MAGIC:
        raise PointFormatError(f"{path}: missing {BINARY_MAGIC!r} magic")
    if len(data) < 4 + _COUNT.size:
        raise PointFormatError(f"{path}: truncated header")
    (n,) = _COUNT.unpack_from(data, 4)
    expected = 4 + _COUNT.size + 16 * n
    if len(data) != expected:
        raise PointFormatError(
            f"{path}: header announces {n} points ({expected} bytes) but file has {len(data)} bytes"
        )
    body = np.frombuffer(data, dtype="<f8", offset=4 + _COUNT.size, count=2 * n)
    return PointSet(body[:n].astype(np.float64), body[n:].astype(np.float64))


def _read_text(path) -> PointSet:
    with open(path, "r", encoding="ascii", errors="strict") as fh:
        header = fh.readline().strip()
        if header != TEXT_HEADER:
            raise PointFormatError(f"{path}: expected header {TEXT_HEADER!r}, got {header[:40]!r}")
        tokens = fh.read().split()
    if len(tokens) % 2:
        raise PointFormatError(f"{path}: truncated payload, odd number of coordinates")
    try:
        flat = np.array(tokens, dtype=np.float64)
    except ValueError as exc:
        raise PointFormatError(f"{path}: malformed coordinate ({exc})") from None
    return PointSet(flat[0::2].copy(), flat[1::2].copy())


def read_points(path, fmt: str | None = None) -> PointSet:
    """Load a point set; ``fmt=None`` detects the format from the magic bytes."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"{path}: no such file")
    try:
        fmt = fmt or sniff_format(path)
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
        points = _read_binary(path) if fmt == "binary" else _read_text(path)
    except UnicodeDecodeError as exc:
        raise PointFormatError(f"{path}: not a text point file ({exc.reason})") from None
    _check_finite(points, str(path))
    return points
