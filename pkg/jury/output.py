"""CSV serialization, the flat config-file format, and run manifests.

Every file is written to ``<name>.tmp`` first and moved into place, so a
reader never sees a half-written CSV or manifest.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from pathlib import Path
from typing import Iterable, List, Sequence, Union, get_origin

from jsonschema import ValidationError as JSONSchemaValidationError
from jsonschema import validate as jsonschema_validate
from pydantic import ValidationError

from .errors import ConfigError, ManifestError
from .experiments import ReferenceRecord, SweepResult
from .schemas.manifest_schema import MANIFEST_SCHEMA
from .schemas.models import RunManifest, SweepConfig

PathLike = Union[str, os.PathLike]

SWEEP_HEADER = (
    "sigma_E",
    "mu_E",
    "judge_param1",
    "judge_param2",
    "policy",
    "trials",
    "seed",
    "accuracy_mean",
    "accuracy_stderr",
)
CURVE_HEADER = ("p_j", "accuracy")
BASELINE_HEADER = (
    "sigma_E",
    "mu_E",
    "optimal_mean",
    "optimal_stderr",
    "majority_mean",
    "majority_stderr",
)
MANIFEST_SUFFIX = ".manifest.json"

_LIST_FIELDS = frozenset(
    name
    for name, info in SweepConfig.model_fields.items()
    if get_origin(info.annotation) in (list, List)
)


def fmt(value: float) -> str:
    """Six significant digits."""
    return f"{value:.6g}"


def _atomic_write(path: PathLike, text: str) -> None:
    target = Path(path)
    tmp = target.with_name(target.name + ".tmp")
    try:
        tmp.write_text(text, encoding="utf-8", newline="")
        tmp.replace(target)
    except Exception:
        tmp.unlink(missing_ok=True)
        raise


def _render(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


# ── CSV ──────────────────────────────────────────────────────────────────────


def write_sweep_csv(result: SweepResult, path: PathLike) -> int:
    """Write one row per cell, sorted by cell coordinates; returns the row count."""
    rows = [
        (
            fmt(r.sigma_E),
            fmt(r.mu_E),
            fmt(r.judge_param1),
            "" if r.judge_param2 is None else fmt(r.judge_param2),
            r.policy.value,
            str(r.trials),
            str(r.seed),
            fmt(r.accuracy_mean),
            fmt(r.accuracy_stderr),
        )
        for r in result.sorted_records()
    ]
    _atomic_write(path, _render(SWEEP_HEADER, rows))
    return len(rows)


def write_curve_csv(points: Iterable[tuple[float, float]], path: PathLike) -> int:
    rows = [(fmt(p), fmt(a)) for p, a in points]
    _atomic_write(path, _render(CURVE_HEADER, rows))
    return len(rows)


def write_baseline_csv(records: Iterable[ReferenceRecord], path: PathLike) -> int:
    rows = [
        (
            fmt(r.sigma_E),
            fmt(r.mu_E),
            fmt(r.optimal.mean),
            fmt(r.optimal.stderr),
            fmt(r.majority.mean),
            fmt(r.majority.stderr),
        )
        for r in sorted(records, key=lambda r: (r.sigma_E, r.mu_E))
    ]
    _atomic_write(path, _render(BASELINE_HEADER, rows))
    return len(rows)


def sha256_file(path: PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ── Config file ──────────────────────────────────────────────────────────────


def load_config_file(path: PathLike) -> dict:
    """Parse a flat ``key = value`` file into SweepConfig overrides.

    ``#`` starts a comment; blank lines are skipped; list-valued fields take
    comma-separated values. Values stay strings and are coerced when the
    config is built.

    Raises:
        ConfigError: On an unknown key, a repeated key, or a line without ``=``.
        OSError: When the file cannot be read.
    """
    overrides: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}", "expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in SweepConfig.model_fields:
            raise ConfigError(key, "unknown config key")
        if key in overrides:
            raise ConfigError(key, "set more than once")
        if key in _LIST_FIELDS:
            overrides[key] = [item.strip() for item in value.split(",") if item.strip()]
        else:
            overrides[key] = value
    return overrides


# ── Manifest ─────────────────────────────────────────────────────────────────


def manifest_path_for(csv_path: PathLike) -> Path:
    """``results/run.csv`` → ``results/run.manifest.json``."""
    target = Path(csv_path)
    return target.with_name(target.stem + MANIFEST_SUFFIX)


def replay_path_for(csv_path: PathLike) -> Path:
    """Scratch CSV a manifest replay writes before its digest is checked."""
    target = Path(csv_path)
    return target.with_name(f"{target.stem}.replay{target.suffix}")


def write_manifest(manifest: RunManifest, path: PathLike) -> None:
    payload = manifest.model_dump(mode="json")
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_manifest(path: PathLike) -> RunManifest:
    """Read, schema-validate and parse a manifest.

    Raises:
        ManifestError: If the file is unreadable, is not JSON, or fails either
            the JSON schema or the model validation.
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    try:
        jsonschema_validate(instance=raw, schema=MANIFEST_SCHEMA)
    except JSONSchemaValidationError as exc:
        where = "/".join(str(part) for part in exc.absolute_path) or "<root>"
        raise ManifestError(f"manifest {path} fails schema at {where}: {exc.message}") from exc
    try:
        return RunManifest.model_validate(raw)
    except ValidationError as exc:
        raise ManifestError(f"manifest {path} is invalid: {exc.errors()[0]['msg']}") from exc
