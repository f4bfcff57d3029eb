"""Project version for the jury weighting toolkit."""

__version__ = "0.1.0"
