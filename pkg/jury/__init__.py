"""Distributed weighting of binary-voting experts by imperfect judges."""

from .version import __version__

__all__ = ["__version__"]
