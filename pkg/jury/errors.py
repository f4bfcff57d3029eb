"""Error taxonomy for the jury toolkit and the sweep-cell error translation.

Everything the library raises on bad input or exhausted capacity derives from
`JuryError`, so the CLI can map each class onto an exit code and log one
concise line instead of a stack trace. Sampling failures surface from deep
inside a sweep without knowing which grid cell they belong to; every cell is
therefore evaluated inside `cell_failure_context`, which re-raises them as
`CellError` carrying the cell coordinates.
"""

from __future__ import annotations

import contextlib
from typing import Iterator

from .logging import format_log_context


class JuryError(Exception):
    """Base exception for jury toolkit errors."""


class JuryInputError(JuryError, ValueError):
    """Raised for malformed numeric input (non-finite values, bad shapes)."""


class DomainError(JuryInputError):
    """Raised when a probability lies outside the interval its role allows."""


class DimensionError(JuryInputError):
    """Raised when vectors that must align have different lengths."""


class CapacityError(JuryError):
    """Raised when exhaustive enumeration would exceed its size bound."""

    def __init__(self, what: str, size: int, bound: int, hint: str = "") -> None:
        message = f"{what}: m={size} exceeds the enumeration bound of {bound}"
        if hint:
            message = f"{message}; {hint}"
        super().__init__(message)
        self.size = size
        self.bound = bound


class SamplingError(JuryError):
    """Raised when rejection sampling cannot find mass inside the bounds."""


class CellError(SamplingError):
    """A sweep cell aborted; the message names the cell coordinates."""

    def __init__(self, cell: dict, cause: Exception) -> None:
        super().__init__(f"cell {format_log_context(**cell)} failed: {cause}")
        self.cell = dict(cell)


class ConfigError(JuryError, ValueError):
    """Raised for invalid sweep configuration; names the offending field."""

    def __init__(self, field: str, problem: str) -> None:
        super().__init__(f"{field}: {problem}")
        self.field = field


class ManifestError(JuryError):
    """Raised when a run manifest fails schema validation or cannot be read."""


class RegressionFailure(JuryError):
    """Raised when a self-check deviates from its reference values."""


@contextlib.contextmanager
def cell_failure_context(**cell: object) -> Iterator[None]:
    """Translate sampling failures raised inside a sweep cell into `CellError`.

    Args:
        **cell: Coordinates of the cell being evaluated (``sigma_E``, ``mu_E``,
            judge parameters, policy). ``None`` values are left out of the
            message.

    Raises:
        CellError: When the wrapped block raises `SamplingError`. Errors that
            already are `CellError` pass through untouched.
    """
    try:
        yield
    except CellError:
        raise
    except SamplingError as exc:
        raise CellError(cell, exc) from exc
