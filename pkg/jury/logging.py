"""Logging utilities: configure the package logger and the run banner."""

import logging as pylog
import sys
from typing import Optional

from .version import __version__

log = pylog.getLogger("jury")

_VALID_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET"}
_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def format_log_context(**fields: object) -> str:
    """Format diagnostic fields as a space-separated ``key=value`` string.

    Used to build a uniform context suffix for progress and failure lines
    (cell coordinates, seed, policy). Skips fields whose value is ``None``;
    never raises.
    """
    return " ".join(f"{key}={value}" for key, value in fields.items() if value is not None)


def configure_logging(log_level: str = "INFO") -> None:
    """Attach a stderr handler to the package logger at the given level."""
    level = (log_level or "").upper()
    if level not in _VALID_LEVELS:
        level = "INFO"

    existing = [h for h in log.handlers if getattr(h, "_jury_handler", False)]
    if existing:
        # sys.stderr may have been swapped since the first call
        existing[0].stream = sys.stderr  # type: ignore[attr-defined]
    else:
        handler = pylog.StreamHandler(sys.stderr)
        handler.setFormatter(pylog.Formatter(_FORMAT))
        handler._jury_handler = True  # type: ignore[attr-defined]
        log.addHandler(handler)
    log.setLevel(level)
    log.propagate = False


# pylint: disable=too-many-arguments
def log_run_banner(
    *,
    command: str,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
    policy: Optional[str] = None,
    mode: Optional[str] = None,
    version: str = __version__,
) -> None:
    """Log the startup banner for a CLI command."""
    ruler = "═" * 64
    context = format_log_context(seed=seed, threads=threads, policy=policy, mode=mode)
    lines = [
        ruler,
        f"  jury weighting toolkit v{version} :: {command}",
    ]
    if context:
        lines.append(f"  {context}")
    lines.append(ruler)
    for line in lines:
        log.info(line)
