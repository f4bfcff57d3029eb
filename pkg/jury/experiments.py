"""Monte Carlo sweeps of judge-weighted expert voting over competence distributions.

A sweep cell fixes the expert distribution, the judge source and the weight
policy, then averages accuracy over ``trials`` freshly drawn panels. Trials
run in fixed-size blocks; block ``b`` of a cell draws experts from
``expert_rng.derive((0, b))``, judges from ``judge_rng.derive((b,))`` and
votes from ``expert_rng.derive((2, b))``. Sweeps key the expert stream on the
expert coordinates alone, so cells that differ only in the judge axis or the
policy evaluate the same expert panels.

Nothing here touches files; the CLI serializes the returned records.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, TypeVar, Union

import numpy as np

from .core import CompetencePanel, exact_accuracy_batch, expert_array, simulate_elections
from .enums import EvaluationMode, JudgeAxis, WeightPolicy, ZeroWeightFallback
from .errors import ConfigError, cell_failure_context
from .logging import format_log_context
from .sampling import RandomStream, TruncatedNormalSpec, sample_truncated_normal_batch
from .schemas.models import SweepConfig
from .weighting import aggregate_rows, log_odds_array, perceived_matrix, policy_rows

log = logging.getLogger("jury")

EXPERT_BRANCH = 0
JUDGE_BRANCH = 1
VOTE_BRANCH = 2

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class FixedJudge:
    """A single judge of known competence."""

    competence: float


@dataclass(frozen=True)
class SampledJudges:
    """``count`` judges drawn afresh every trial."""

    spec: TruncatedNormalSpec
    count: int


JudgeSource = Union[FixedJudge, SampledJudges]


@dataclass(frozen=True)
class CellEstimate:
    """Mean accuracy of a cell and its standard error over trials."""

    mean: float
    stderr: float
    trials: int


@dataclass(frozen=True)
class SweepRecord:
    """One grid cell of a sweep."""

    # pylint: disable=too-many-instance-attributes
    sigma_E: float
    mu_E: float
    judge_param1: float
    judge_param2: Optional[float]
    policy: WeightPolicy
    trials: int
    seed: int
    evaluation_mode: EvaluationMode
    accuracy_mean: float
    accuracy_stderr: float

    @property
    def coordinates(self) -> tuple:
        second = -1.0 if self.judge_param2 is None else self.judge_param2
        return (self.sigma_E, self.mu_E, self.judge_param1, second)


@dataclass(frozen=True)
class SweepResult:
    """Records in configured cell order, with the config that produced them."""

    config: SweepConfig
    records: tuple[SweepRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def sorted_records(self) -> list[SweepRecord]:
        return sorted(self.records, key=lambda r: r.coordinates)


@dataclass(frozen=True)
class ReferenceRecord:
    """Log-odds and equal-weight baselines for one expert distribution."""

    sigma_E: float
    mu_E: float
    optimal: CellEstimate
    majority: CellEstimate


# ── Cell evaluation ──────────────────────────────────────────────────────────


def _blocks(trials: int, block_size: int) -> Iterable[tuple[int, int]]:
    for index, start in enumerate(range(0, trials, block_size)):
        yield index, min(block_size, trials - start)


def _estimate(values: np.ndarray) -> CellEstimate:
    trials = values.size
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return CellEstimate(mean, stderr, trials)


def _expert_block(
    spec: TruncatedNormalSpec, expert_count: int, n: int, rng: RandomStream, block: int
) -> np.ndarray:
    stream = rng.derive((EXPERT_BRANCH, block))
    draws = sample_truncated_normal_batch(spec, n * expert_count, stream)
    return draws.reshape(n, expert_count)


# pylint: disable=too-many-arguments,too-many-locals
def cell_accuracy(
    expert_spec: TruncatedNormalSpec,
    judge_source: JudgeSource,
    policy: WeightPolicy,
    trials: int,
    rng: RandomStream,
    *,
    expert_count: int = 5,
    mode: EvaluationMode = EvaluationMode.EXACT,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
    block_size: int = 1000,
    judge_rng: Optional[RandomStream] = None,
) -> CellEstimate:
    """Mean and standard error of accuracy over ``trials`` sampled panels.

    Every trial samples an expert panel (and a judge panel for sampled
    judges), scores the experts, applies ``policy`` per judge row, averages
    the rows and evaluates the weighting: exactly over all vote profiles of
    the realized panel, or by one simulated election.
    """
    if trials < 1:
        raise ConfigError("trials", "must be at least 1")
    if block_size < 1:
        raise ConfigError("block_size", "must be at least 1")
    if judge_rng is None:
        judge_rng = rng.derive((JUDGE_BRANCH,))
    policy = WeightPolicy(policy)
    mode = EvaluationMode(mode)

    accuracies = np.empty(trials, dtype=np.float64)
    offset = 0
    for block, n in _blocks(trials, block_size):
        experts = _expert_block(expert_spec, expert_count, n, rng, block)
        if isinstance(judge_source, FixedJudge):
            judges = np.full((n, 1), float(judge_source.competence))
        else:
            judges = sample_truncated_normal_batch(
                judge_source.spec, n * judge_source.count, judge_rng.derive((block,))
            ).reshape(n, judge_source.count)
        scores = policy_rows(log_odds_array(perceived_matrix(judges, experts)), policy)
        weights = aggregate_rows(scores)
        if mode is EvaluationMode.EXACT:
            accuracies[offset:offset + n] = exact_accuracy_batch(experts, weights, fallback)
        else:
            votes_rng = rng.derive((VOTE_BRANCH, block))
            correct = simulate_elections(experts, weights, votes_rng, fallback)
            accuracies[offset:offset + n] = correct
        offset += n
    return _estimate(accuracies)


def reference_accuracies(
    expert_spec: TruncatedNormalSpec,
    expert_count: int,
    trials: int,
    rng: RandomStream,
    *,
    block_size: int = 1000,
) -> tuple[CellEstimate, CellEstimate]:
    """Exact accuracy of the log-odds rule and of simple majority on the same panels.

    Draws the same expert panels as `cell_accuracy` does for ``rng``.
    """
    optimal = np.empty(trials, dtype=np.float64)
    majority = np.empty(trials, dtype=np.float64)
    offset = 0
    for block, n in _blocks(trials, block_size):
        experts = _expert_block(expert_spec, expert_count, n, rng, block)
        optimal[offset:offset + n] = exact_accuracy_batch(experts, log_odds_array(experts))
        majority[offset:offset + n] = exact_accuracy_batch(experts, np.ones_like(experts))
        offset += n
    return _estimate(optimal), _estimate(majority)


# ── Sweeps ───────────────────────────────────────────────────────────────────


def _run_ordered(fn: Callable[[T], R], items: Sequence[T], threads: int) -> list[R]:
    """Map ``fn`` over ``items``, in parallel when threads > 1, preserving order."""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _expert_spec(config: SweepConfig, mu: float, sigma: float) -> TruncatedNormalSpec:
    return TruncatedNormalSpec(mu, sigma, config.expert_lo, config.expert_hi)


def single_judge_sweep(config: SweepConfig, threads: int = 1) -> SweepResult:
    """One record per (sigma_E, mu_E, p_j), in that nesting order."""
    if config.judge_axis is not JudgeAxis.FIXED:
        raise ConfigError("judge_axis", "single-judge sweeps need the fixed competence axis")
    master = RandomStream(config.master_seed)
    cells = list(
        itertools.product(
            enumerate(config.expert_sigma_set),
            enumerate(config.expert_mu_grid),
            config.judge_competence_grid,
        )
    )
    log.info(
        "single-judge sweep: %d cells %s",
        len(cells),
        format_log_context(
            trials=config.trials, policy=config.policy.value, seed=config.master_seed
        ),
    )

    def run(cell) -> SweepRecord:
        (i_sigma, sigma), (i_mu, mu), p_j = cell
        with cell_failure_context(sigma_E=sigma, mu_E=mu, p_j=p_j, policy=config.policy.value):
            estimate = cell_accuracy(
                _expert_spec(config, mu, sigma),
                FixedJudge(p_j),
                config.policy,
                config.trials,
                master.derive((EXPERT_BRANCH, i_sigma, i_mu)),
                expert_count=config.expert_count,
                mode=config.evaluation_mode,
                fallback=config.zero_weight_fallback,
                block_size=config.block_size,
            )
        log.debug(
            "cell done %s mean=%.6f",
            format_log_context(sigma_E=sigma, mu_E=mu, p_j=p_j),
            estimate.mean,
        )
        return _record(config, sigma, mu, p_j, None, estimate)

    return SweepResult(config, tuple(_run_ordered(run, cells, threads)))


def multi_judge_sweep(config: SweepConfig, threads: int = 1) -> SweepResult:
    """One record per (sigma_E, mu_E, sigma_J, mu_J); judges and experts resampled every trial."""
    if config.judge_axis is not JudgeAxis.SAMPLED:
        raise ConfigError("judge_axis", "multi-judge sweeps need the sampled judge axis")
    master = RandomStream(config.master_seed)
    cells = list(
        itertools.product(
            enumerate(config.expert_sigma_set),
            enumerate(config.expert_mu_grid),
            enumerate(config.judge_sigma_set),
            enumerate(config.judge_mu_grid),
        )
    )
    log.info(
        "multi-judge sweep: %d cells %s",
        len(cells),
        format_log_context(
            judges=config.judge_count,
            trials=config.trials,
            policy=config.policy.value,
            seed=config.master_seed,
        ),
    )

    def run(cell) -> SweepRecord:
        (i_sigma, sigma), (i_mu, mu), (j_sigma, sigma_j), (j_mu, mu_j) = cell
        judges = SampledJudges(
            TruncatedNormalSpec(mu_j, sigma_j, config.judge_lo, config.judge_hi),
            config.judge_count,
        )
        with cell_failure_context(
            sigma_E=sigma, mu_E=mu, mu_J=mu_j, sigma_J=sigma_j, policy=config.policy.value
        ):
            estimate = cell_accuracy(
                _expert_spec(config, mu, sigma),
                judges,
                config.policy,
                config.trials,
                master.derive((EXPERT_BRANCH, i_sigma, i_mu)),
                expert_count=config.expert_count,
                mode=config.evaluation_mode,
                fallback=config.zero_weight_fallback,
                block_size=config.block_size,
                judge_rng=master.derive((JUDGE_BRANCH, i_sigma, i_mu, j_sigma, j_mu)),
            )
        return _record(config, sigma, mu, mu_j, sigma_j, estimate)

    return SweepResult(config, tuple(_run_ordered(run, cells, threads)))


def run_sweep(config: SweepConfig, threads: int = 1) -> SweepResult:
    """Dispatch on the judge axis."""
    if config.judge_axis is JudgeAxis.FIXED:
        return single_judge_sweep(config, threads)
    return multi_judge_sweep(config, threads)


def baseline_sweep(config: SweepConfig, threads: int = 1) -> list[ReferenceRecord]:
    """Log-odds and simple-majority accuracy for every (sigma_E, mu_E) of ``config``."""
    master = RandomStream(config.master_seed)
    cells = list(
        itertools.product(enumerate(config.expert_sigma_set), enumerate(config.expert_mu_grid))
    )

    def run(cell) -> ReferenceRecord:
        (i_sigma, sigma), (i_mu, mu) = cell
        with cell_failure_context(sigma_E=sigma, mu_E=mu):
            optimal, majority = reference_accuracies(
                _expert_spec(config, mu, sigma),
                config.expert_count,
                config.trials,
                master.derive((EXPERT_BRANCH, i_sigma, i_mu)),
                block_size=config.block_size,
            )
        return ReferenceRecord(sigma, mu, optimal, majority)

    return _run_ordered(run, cells, threads)


def _record(
    config: SweepConfig,
    sigma: float,
    mu: float,
    first: float,
    second: Optional[float],
    estimate: CellEstimate,
) -> SweepRecord:
    return SweepRecord(
        sigma_E=sigma,
        mu_E=mu,
        judge_param1=first,
        judge_param2=second,
        policy=config.policy,
        trials=estimate.trials,
        seed=config.master_seed,
        evaluation_mode=config.evaluation_mode,
        accuracy_mean=estimate.mean,
        accuracy_stderr=estimate.stderr,
    )


# ── Exact curve and summaries ────────────────────────────────────────────────


def judge_curve(
    panel: Union[CompetencePanel, Sequence[float]],
    resolution: int,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> list[tuple[float, float]]:
    """Exact accuracy of a single judge's perceived log-odds rule for p_j across [0, 1]."""
    if resolution < 2:
        raise ConfigError("resolution", "must be at least 2")
    experts = expert_array(panel)
    competences = np.linspace(0.0, 1.0, resolution)
    weights = log_odds_array(perceived_matrix(competences, experts))
    panels = np.broadcast_to(experts, weights.shape)
    accuracies = exact_accuracy_batch(panels, weights, fallback)
    return [(float(p), float(a)) for p, a in zip(competences, accuracies)]


def grid_mean(result: SweepResult) -> float:
    """Unweighted mean of the cell accuracies."""
    return float(np.mean([record.accuracy_mean for record in result.records]))


def policy_gaps(
    results: Mapping[WeightPolicy, SweepResult],
) -> dict[tuple[WeightPolicy, WeightPolicy], float]:
    """Grid-mean differences between policies run over the same grid and seed."""
    means = {WeightPolicy(policy): grid_mean(result) for policy, result in results.items()}
    order = [p for p in WeightPolicy if p in means]
    return {(a, b): means[a] - means[b] for a, b in itertools.combinations(order, 2)}
