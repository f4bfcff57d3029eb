"""Typed Pydantic models for sweep configuration and run manifests."""

# Pylint: pydantic models are data containers by design
# pylint: disable=R0903

from __future__ import annotations

import math
from datetime import datetime
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..config import DEFAULT_SEED, SEED_LIMIT
from ..core import MAX_ACCURACY_EXPERTS
from ..enums import EvaluationMode, JudgeAxis, WeightPolicy, ZeroWeightFallback


def _tenths(first: int, last: int) -> List[float]:
    return [round(k / 10, 10) for k in range(first, last + 1)]


DEFAULT_MU_GRID = _tenths(1, 9)
DEFAULT_JUDGE_COMPETENCES = _tenths(1, 10)
SINGLE_JUDGE_SIGMAS = _tenths(1, 4)
MULTI_JUDGE_SIGMAS = [0.1, 0.4]
MULTI_JUDGE_COUNT = 10
DEFAULT_TRIALS = 50_000


class SweepConfig(BaseModel):
    """Grid, policy and sampling settings of one sweep.

    Fields are flat so the key-value config file and the manifest's ``config``
    object map onto them one-to-one.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    # ── Experts ──────────────────────────────────
    expert_count: int = 5
    expert_mu_grid: List[float] = DEFAULT_MU_GRID
    expert_sigma_set: List[float] = SINGLE_JUDGE_SIGMAS
    expert_lo: float = 0.1
    expert_hi: float = 0.9

    # ── Judges ───────────────────────────────────
    judge_axis: JudgeAxis = JudgeAxis.FIXED
    judge_count: int = 1
    # fixed axis: the single judge's competence takes each value in turn
    judge_competence_grid: List[float] = DEFAULT_JUDGE_COMPETENCES
    # sampled axis: every trial draws judge_count judges from N(mu_J, sigma_J)
    judge_mu_grid: List[float] = DEFAULT_MU_GRID
    judge_sigma_set: List[float] = MULTI_JUDGE_SIGMAS
    judge_lo: float = 0.1
    judge_hi: float = 0.9

    # ── Evaluation ───────────────────────────────
    policy: WeightPolicy = WeightPolicy.UNRESTRICTED
    trials: int = DEFAULT_TRIALS
    master_seed: int = DEFAULT_SEED
    evaluation_mode: EvaluationMode = EvaluationMode.EXACT
    zero_weight_fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY
    block_size: int = 1000

    @classmethod
    def single_judge(cls, **overrides) -> "SweepConfig":
        """Central-judge heatmap grid: p_j × mu_E × sigma_E."""
        return cls(**overrides)

    @classmethod
    def multi_judge(
        cls, policy: WeightPolicy = WeightPolicy.UNRESTRICTED, **overrides
    ) -> "SweepConfig":
        """Ten sampled judges: mu_J × sigma_J × mu_E × sigma_E, low and high variance."""
        values = {
            "expert_sigma_set": MULTI_JUDGE_SIGMAS,
            "judge_axis": JudgeAxis.SAMPLED,
            "judge_count": MULTI_JUDGE_COUNT,
            "policy": policy,
        }
        values.update(overrides)
        return cls(**values)

    # ── Validators ────────────────────────────────────────────────────────────
    @field_validator("expert_count")
    @classmethod
    def _validate_expert_count(cls, value: int) -> int:
        if not 1 <= value <= MAX_ACCURACY_EXPERTS:
            raise ValueError(f"must be between 1 and {MAX_ACCURACY_EXPERTS}")
        return value

    @field_validator("judge_count", "trials", "block_size")
    @classmethod
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator("master_seed")
    @classmethod
    def _validate_seed(cls, value: int) -> int:
        if not 0 <= value < SEED_LIMIT:
            raise ValueError("must be an unsigned 64-bit integer")
        return value

    @field_validator("expert_mu_grid", "judge_mu_grid")
    @classmethod
    def _finite_grid(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("grid must not be empty")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("grid values must be finite")
        return values

    @field_validator("expert_sigma_set", "judge_sigma_set")
    @classmethod
    def _positive_sigmas(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("sigma set must not be empty")
        if not all(math.isfinite(v) and v > 0 for v in values):
            raise ValueError("sigmas must be positive and finite")
        return values

    @field_validator("judge_competence_grid")
    @classmethod
    def _competences(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("grid must not be empty")
        if not all(0.0 <= v <= 1.0 for v in values):
            raise ValueError("judge competences must lie in [0, 1]")
        return values

    @field_validator("expert_lo", "expert_hi", "judge_lo", "judge_hi")
    @classmethod
    def _unit_bound(cls, value: float) -> float:
        if not 0.0 <= value <= 1.0:
            raise ValueError("truncation bounds must lie in [0, 1]")
        return value

    @model_validator(mode="after")
    def _validate_bounds_and_axis(self):
        if not self.expert_lo < self.expert_hi:
            raise ValueError("expert_lo must be below expert_hi")
        if not self.judge_lo < self.judge_hi:
            raise ValueError("judge_lo must be below judge_hi")
        if self.judge_axis is JudgeAxis.FIXED and self.judge_count != 1:
            raise ValueError("judge_count must be 1 when judge_axis is 'fixed'")
        return self


class RunManifest(BaseModel):
    """Everything needed to reproduce one CSV output bit-for-bit."""

    model_config = ConfigDict(extra="ignore")

    tool_version: str
    command: str
    config: SweepConfig
    master_seed: int
    timestamp: datetime
    evaluation_mode: EvaluationMode
    policy: WeightPolicy
    zero_weight_fallback: ZeroWeightFallback
    csv_path: str
    csv_sha256: str
    rows: int
    threads: Optional[int] = None
