"""Runtime settings loaded from ``JURY_*`` environment variables and ``.env``."""

from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .enums import ZeroWeightFallback

# 2^64: master seeds are unsigned 64-bit integers.
SEED_LIMIT = 1 << 64
DEFAULT_SEED = 20220701


class Settings(BaseSettings):
    """Defaults the CLI falls back to when neither a flag nor a config file sets a value."""

    model_config = SettingsConfigDict(
        env_prefix="JURY_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # JURY_SEED supplies the master seed default.
    seed: int = DEFAULT_SEED
    threads: int = 1
    log_level: str = "INFO"
    zero_weight_fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY
    # Trials per random substream inside a sweep cell. Part of the
    # reproducibility contract: changing it changes the draws.
    block_size: int = 1000

    @field_validator("seed")
    @classmethod
    def _validate_seed(cls, value: int) -> int:
        if not 0 <= value < SEED_LIMIT:
            raise ValueError("seed must be an unsigned 64-bit integer")
        return value

    @field_validator("threads", "block_size")
    @classmethod
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator("log_level")
    @classmethod
    def _normalize_level(cls, value: str) -> str:
        level = (value or "").strip().upper()
        valid = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET"}
        return level if level in valid else "INFO"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return a cached Settings instance (validates env on first call)."""
    return Settings()
