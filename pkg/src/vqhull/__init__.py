"""Vectorized in-place Quickhull for planar point sets."""
from ._backend import available_backends, backend_name, get_backend
from .config import HullConfig
from .errors import (
    EmptyInputError, ExtractionError, InvariantViolation, PointFormatError, VQHullError,
)
from .extract import ExtractOutcome, LaneConfig, classify_block, compress_select, extract_subsets
from .geometry import DirectedEdge, Point, PointSet, find_extremes, is_farther, is_left_of
from .hull import HullPolygon, convex_hull, hull_indices, split_budget
from .parallel import (
    MergeBounds, WorkerLayout, block_cyclic_indices, merge_and_cleanup, parallel_extract,
    worker_extract,
)
from .traffic import HullProbe, TrafficModel, bytes_model

__version__ = "0.1.0"

__all__ = [
    "DirectedEdge", "EmptyInputError", "ExtractOutcome", "ExtractionError", "HullConfig",
    "HullPolygon", "HullProbe", "InvariantViolation", "LaneConfig", "MergeBounds", "Point",
    "PointFormatError", "PointSet", "TrafficModel", "VQHullError", "WorkerLayout",
    "available_backends", "backend_name", "block_cyclic_indices", "bytes_model",
    "classify_block", "compress_select", "convex_hull", "extract_subsets", "find_extremes",
    "get_backend", "hull_indices", "is_farther", "is_left_of", "merge_and_cleanup",
    "parallel_extract", "split_budget", "worker_extract",
]
