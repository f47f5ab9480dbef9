"""Exception types shared by the kernels and the public API."""


class VQHullError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInputError(VQHullError, ValueError):
    """An operation that needs at least one point received none."""


class ExtractionError(VQHullError, RuntimeError):
    """The parallel step left a window point that belongs to neither subset."""


class InvariantViolation(VQHullError, AssertionError):
    """A debug-mode loop invariant of the subset extraction failed."""


class PointFormatError(VQHullError, ValueError):
    """A point file could not be decoded."""
