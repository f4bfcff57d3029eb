"""Pydantic models and JSON schemas for sweep configuration and manifests."""

from .manifest_schema import MANIFEST_SCHEMA
from .models import RunManifest, SweepConfig

__all__ = ["MANIFEST_SCHEMA", "RunManifest", "SweepConfig"]
