"""Judge scores, weight policies and their aggregation into expert weights.

A judge of competence p_j perceives expert e as agreeing with them with
probability ``p_j·p_e + (1-p_j)(1-p_e)`` and scores the expert with the
natural log-odds of that perception. Each judge's score row passes through a
`WeightPolicy` before the rows are averaged column-wise into one weight per
expert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.special import expit, logit

from .core import (
    CompetencePanel,
    WeightVector,
    coalition_structure,
    expert_array,
)
from .enums import ThresholdKind, WeightPolicy, ZeroWeightFallback
from .errors import DimensionError, DomainError, JuryInputError

DEFAULT_THRESHOLD_TOLERANCE = 1e-4
# resolution of the scan that brackets the threshold before bisecting
_COARSE_STEP = 0.01


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """n×m finite scores; row j holds judge j's score for every expert."""

    scores: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        scores = np.array(self.scores, dtype=np.float64, copy=True)
        if scores.ndim != 2 or 0 in scores.shape:
            raise DimensionError(f"score matrix must be a non-empty n×m matrix, got {scores.shape}")
        if not np.all(np.isfinite(scores)):
            raise JuryInputError("scores must be finite")
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)

    @property
    def judges(self) -> int:
        return self.scores.shape[0]

    @property
    def experts(self) -> int:
        return self.scores.shape[1]

    def row(self, judge: int) -> WeightVector:
        return WeightVector(tuple(self.scores[judge]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScoreMatrix):
            return NotImplemented
        return np.array_equal(self.scores, other.scores)

    def __hash__(self) -> int:
        return hash((self.scores.shape, self.scores.tobytes()))


@dataclass(frozen=True)
class EquivalenceThreshold:
    """Smallest judge competence whose perceived log-odds rule equals the true one."""

    kind: ThresholdKind
    value: Optional[float] = None

    @property
    def competence(self) -> float:
        """Numeric reading: 0.5 when always equivalent, 1.0 when never below 1."""
        if self.kind is ThresholdKind.ALWAYS:
            return 0.5
        if self.kind is ThresholdKind.NEVER:
            return 1.0
        return float(self.value)


# ── Scalar operations ────────────────────────────────────────────────────────


def _probability(value: float, name: str, closed: bool) -> float:
    value = float(value)
    inside = 0.0 <= value <= 1.0 if closed else 0.0 < value < 1.0
    if not math.isfinite(value) or not inside:
        interval = "[0, 1]" if closed else "(0, 1)"
        raise DomainError(f"{name}={value} must lie in {interval}")
    return value


def log_odds(p: float) -> float:
    """Natural log-odds ln(p / (1 - p)); undefined at complete certainty."""
    return float(logit(_probability(p, "p", closed=False)))


def log_odds_array(values: np.ndarray) -> np.ndarray:
    """Element-wise natural log-odds of an array of competences."""
    return logit(values)


def optimal_weights(panel: Union[CompetencePanel, Sequence[float]]) -> WeightVector:
    """The log-odds rule for an expert panel."""
    return WeightVector(tuple(log_odds_array(expert_array(panel))))


def perceived_competence(p_j: float, p_e: float) -> float:
    """Probability that a judge of competence p_j agrees with an expert of competence p_e."""
    p_j = _probability(p_j, "p_j", closed=True)
    p_e = _probability(p_e, "p_e", closed=False)
    return p_j * p_e + (1.0 - p_j) * (1.0 - p_e)


def perceived_matrix(judges: np.ndarray, experts: np.ndarray) -> np.ndarray:
    """Broadcast perceived competences; judges on axis -2, experts on axis -1."""
    j = judges[..., :, None]
    e = experts[..., None, :]
    return j * e + (1.0 - j) * (1.0 - e)


def judge_scores(p_j: float, panel: Union[CompetencePanel, Sequence[float]]) -> WeightVector:
    """Log-odds of a single judge's perceived competences, one per expert."""
    p_j = _probability(p_j, "p_j", closed=True)
    experts = expert_array(panel)
    return WeightVector(tuple(log_odds_array(perceived_matrix(np.array([p_j]), experts)[0])))


def score_matrix(
    judges: Union[CompetencePanel, Sequence[float]],
    experts: Union[CompetencePanel, Sequence[float]],
) -> ScoreMatrix:
    """Row j is ``judge_scores(p_j, experts)``."""
    if not isinstance(judges, CompetencePanel):
        judges = CompetencePanel.judges(judges)
    return ScoreMatrix(log_odds_array(perceived_matrix(judges.as_array(), expert_array(experts))))


def perceived_scores(perceived: Union[np.ndarray, Sequence[Sequence[float]]]) -> ScoreMatrix:
    """Scores from an explicit n×m matrix of perceived competences."""
    perceived = np.asarray(perceived, dtype=np.float64)
    if not np.all((perceived > 0.0) & (perceived < 1.0)):
        raise DomainError("perceived competences must lie in (0, 1)")
    return ScoreMatrix(log_odds_array(perceived))


# ── Policies and aggregation ─────────────────────────────────────────────────


def policy_rows(scores: np.ndarray, policy: WeightPolicy) -> np.ndarray:
    """Apply ``policy`` to every row (last axis) of a score array of any rank."""
    policy = WeightPolicy(policy)
    if policy is WeightPolicy.UNRESTRICTED:
        return scores
    clamped = np.maximum(scores, 0.0)
    if policy is WeightPolicy.NON_NEGATIVE:
        return clamped
    totals = clamped.sum(axis=-1, keepdims=True)
    uniform = np.full_like(clamped, 1.0 / clamped.shape[-1])
    # an all-pessimistic judge spreads its budget evenly
    return np.where(totals > 0.0, clamped / np.where(totals > 0.0, totals, 1.0), uniform)


def apply_policy(scores: ScoreMatrix, policy: WeightPolicy) -> ScoreMatrix:
    """Clamp, or clamp and normalize, each judge's row; Unrestricted is the identity."""
    if WeightPolicy(policy) is WeightPolicy.UNRESTRICTED:
        return scores
    return ScoreMatrix(policy_rows(scores.scores, policy))


def aggregate(scores: ScoreMatrix) -> WeightVector:
    """Column-wise arithmetic mean of the judges' scores."""
    return WeightVector(tuple(scores.scores.mean(axis=0)))


def aggregate_rows(scores: np.ndarray) -> np.ndarray:
    """Mean over the judge axis (-2) of a stacked ``(..., n, m)`` score array."""
    return scores.mean(axis=-2)


# ── Geometric-mean identities ────────────────────────────────────────────────


def _perceived_list(perceived: Iterable[float]) -> np.ndarray:
    values = np.asarray(list(perceived), dtype=np.float64)
    if values.size == 0:
        raise DimensionError("need at least one perceived competence")
    if not np.all((values > 0.0) & (values < 1.0)):
        raise DomainError("perceived competences must lie in (0, 1)")
    return values


def geometric_mean_odds(perceived: Iterable[float]) -> float:
    """Geometric mean of the odds p/(1-p), computed in the log domain."""
    return float(np.exp(logit(_perceived_list(perceived)).mean()))


def gm_deviation_alpha(true_p: float, perceived: Iterable[float]) -> float:
    """Factor by which the judges' geometric-mean odds miss the expert's true odds.

    The aggregated unrestricted weight of the expert equals
    ``log_odds(true_p) + ln(alpha)``.
    """
    true_logit = log_odds(true_p)
    return float(np.exp(logit(_perceived_list(perceived)).mean() - true_logit))


def perceived_with_odds(
    true_p: float, free: Sequence[float], alpha: float = 1.0
) -> np.ndarray:
    """Complete ``free`` with one perceived competence so the GM odds equal alpha × true odds."""
    if alpha <= 0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be positive and finite, got {alpha}")
    free = np.asarray(free, dtype=np.float64)
    n = free.size + 1
    target = n * (log_odds(true_p) + math.log(alpha)) - logit(free).sum()
    last = float(expit(target))
    if not 0.0 < last < 1.0:
        raise DomainError("the completing perceived competence saturates at 0 or 1")
    return np.append(free, last)


# ── Equivalence threshold ────────────────────────────────────────────────────


def equivalence_threshold(
    panel: Union[CompetencePanel, Sequence[float]],
    tolerance: float = DEFAULT_THRESHOLD_TOLERANCE,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> EquivalenceThreshold:
    """Lowest judge competence above which the judge's rule equals the log-odds rule.

    A scan at a coarse step brackets the switch from "different" to
    "equivalent"; when the scan shows a single switch the bracket is bisected
    to ``tolerance``, otherwise every point is scanned at ``tolerance``
    resolution from 1.0 downwards.
    """
    experts = expert_array(panel)
    target = coalition_structure(log_odds_array(experts), fallback)

    def matches(p_j: float) -> bool:
        return coalition_structure(judge_scores(p_j, experts), fallback) == target

    lowest = 0.5 + tolerance
    if not matches(1.0 - tolerance):
        return EquivalenceThreshold(ThresholdKind.NEVER, 1.0)

    steps = max(2, int(math.ceil((1.0 - lowest) / _COARSE_STEP)) + 1)
    grid = np.linspace(lowest, 1.0, steps)
    flags = [matches(float(p)) for p in grid]
    if all(flags):
        return EquivalenceThreshold(ThresholdKind.ALWAYS)

    first_true = flags.index(True) if True in flags else len(flags) - 1
    if all(flags[first_true:]) and not any(flags[:first_true]):
        lo, hi = float(grid[first_true - 1]), float(grid[first_true])
        while hi - lo > tolerance:
            mid = 0.5 * (lo + hi)
            if matches(mid):
                hi = mid
            else:
                lo = mid
        return EquivalenceThreshold(ThresholdKind.VALUE, hi)

    return EquivalenceThreshold(ThresholdKind.VALUE, _scan_threshold(matches, lowest, tolerance))


def _scan_threshold(matches, lowest: float, tolerance: float) -> float:
    """Smallest grid point from which every point up to 1.0 matches."""
    threshold = 1.0
    p = 1.0 - tolerance
    while p >= lowest and matches(p):
        threshold = p
        p -= tolerance
    return threshold
