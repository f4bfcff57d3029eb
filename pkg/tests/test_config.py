"""Contract tests for ``JURY_*`` environment parsing.

``Settings(_env_file=None)`` isolates each case from the developer's local
``.env`` so results depend only on the env vars set via ``monkeypatch``.
"""

from __future__ import annotations

# pylint: disable=import-outside-toplevel

import pathlib
import sys

import pytest
from pydantic import ValidationError

REPO_ROOT = str(pathlib.Path(__file__).resolve().parents[1])
if REPO_ROOT not in sys.path:
    sys.path.insert(0, REPO_ROOT)

ENV_VARS = (
    "JURY_SEED",
    "JURY_THREADS",
    "JURY_LOG_LEVEL",
    "JURY_ZERO_WEIGHT_FALLBACK",
    "JURY_BLOCK_SIZE",
)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)


def _make_settings():
    """Construct Settings isolated from any local .env file."""
    from jury.config import Settings

    return Settings(_env_file=None)


def test_defaults_when_unset() -> None:
    from jury.config import DEFAULT_SEED
    from jury.enums import ZeroWeightFallback

    settings = _make_settings()
    assert settings.seed == DEFAULT_SEED
    assert settings.threads == 1
    assert settings.log_level == "INFO"
    assert settings.zero_weight_fallback is ZeroWeightFallback.MAJORITY
    assert settings.block_size == 1000


def test_seed_from_environment(monkeypatch) -> None:
    monkeypatch.setenv("JURY_SEED", "18446744073709551615")
    assert _make_settings().seed == (1 << 64) - 1


@pytest.mark.parametrize("value", ["-1", "18446744073709551616"])
def test_seed_outside_u64_is_rejected(monkeypatch, value) -> None:
    monkeypatch.setenv("JURY_SEED", value)
    with pytest.raises(ValidationError, match="seed"):
        _make_settings()


@pytest.mark.parametrize("env_var", ["JURY_THREADS", "JURY_BLOCK_SIZE"])
def test_counts_must_be_positive(monkeypatch, env_var) -> None:
    monkeypatch.setenv(env_var, "0")
    with pytest.raises(ValidationError, match="at least 1"):
        _make_settings()


@pytest.mark.parametrize(
    "raw, expected", [("debug", "DEBUG"), (" warning ", "WARNING"), ("loud", "INFO")]
)
def test_log_level_is_normalized(monkeypatch, raw, expected) -> None:
    monkeypatch.setenv("JURY_LOG_LEVEL", raw)
    assert _make_settings().log_level == expected


def test_fallback_from_environment(monkeypatch) -> None:
    from jury.enums import ZeroWeightFallback

    monkeypatch.setenv("JURY_ZERO_WEIGHT_FALLBACK", "coinflip")
    assert _make_settings().zero_weight_fallback is ZeroWeightFallback.COINFLIP


def test_unknown_fallback_is_rejected(monkeypatch) -> None:
    monkeypatch.setenv("JURY_ZERO_WEIGHT_FALLBACK", "dictator")
    with pytest.raises(ValidationError):
        _make_settings()


def test_dotenv_file_is_read(monkeypatch, tmp_path) -> None:
    from jury.config import Settings

    env_file = tmp_path / ".env"
    env_file.write_text("JURY_SEED=123\nJURY_THREADS=3\n")
    settings = Settings(_env_file=str(env_file))
    assert (settings.seed, settings.threads) == (123, 3)


def test_get_settings_is_cached(monkeypatch) -> None:
    from jury.config import get_settings

    get_settings.cache_clear()
    monkeypatch.setenv("JURY_SEED", "5")
    first = get_settings()
    monkeypatch.setenv("JURY_SEED", "6")
    assert get_settings() is first
    assert first.seed == 5
    get_settings.cache_clear()
