"""Tests for sweep-cell evaluation, the single- and multi-judge sweeps, the
exact judge curve, and the grid summaries.

Cells that differ only in the judge axis share expert draws, so several
expectations here are exact identities (a perfect judge reproduces the log-odds
baseline panel for panel) rather than statistical tolerances. Full default
grids at 50k trials are marked ``slow``.
"""

from __future__ import annotations

import pathlib
import sys

import pytest

REPO_ROOT = str(pathlib.Path(__file__).resolve().parents[1])
if REPO_ROOT not in sys.path:
    sys.path.insert(0, REPO_ROOT)

from jury.core import exact_accuracy
from jury.enums import EvaluationMode, JudgeAxis, WeightPolicy
from jury.errors import CellError, ConfigError
from jury.experiments import (
    FixedJudge,
    SampledJudges,
    SweepRecord,
    SweepResult,
    baseline_sweep,
    cell_accuracy,
    grid_mean,
    judge_curve,
    multi_judge_sweep,
    policy_gaps,
    reference_accuracies,
    run_sweep,
    single_judge_sweep,
)
from jury.sampling import RandomStream, TruncatedNormalSpec
from jury.schemas.models import SweepConfig

PANEL = (0.6, 0.6, 0.6, 0.7, 0.9)
SPEC = TruncatedNormalSpec(0.7, 0.2)
UNRESTRICTED = WeightPolicy.UNRESTRICTED


def _small_single(**overrides) -> SweepConfig:
    values = {
        "expert_mu_grid": [0.6, 0.8],
        "expert_sigma_set": [0.1],
        "judge_competence_grid": [0.5, 1.0],
        "trials": 200,
        "master_seed": 1,
    }
    values.update(overrides)
    return SweepConfig.single_judge(**values)


def _small_multi(policy=UNRESTRICTED, **overrides) -> SweepConfig:
    values = {
        "expert_mu_grid": [0.6],
        "expert_sigma_set": [0.1, 0.4],
        "judge_mu_grid": [0.5, 0.7],
        "judge_sigma_set": [0.1],
        "trials": 100,
        "master_seed": 2,
    }
    values.update(overrides)
    return SweepConfig.multi_judge(policy, **values)


# ── cell_accuracy ────────────────────────────────────────────────────────────


def test_perfect_judge_reproduces_log_odds_baseline():
    rng = RandomStream(10, (0, 0, 0))
    judged = cell_accuracy(SPEC, FixedJudge(1.0), UNRESTRICTED, 500, rng)
    optimal, _ = reference_accuracies(SPEC, 5, 500, rng)
    assert judged.mean == pytest.approx(optimal.mean, abs=1e-12)


def test_uninformed_judge_reproduces_equal_weight_baseline():
    rng = RandomStream(10, (0, 0, 0))
    judged = cell_accuracy(SPEC, FixedJudge(0.5), UNRESTRICTED, 500, rng)
    _, majority = reference_accuracies(SPEC, 5, 500, rng)
    assert judged.mean == pytest.approx(majority.mean, abs=1e-12)


def test_perfect_judge_beats_uninformed_judge():
    rng = RandomStream(11)
    perfect = cell_accuracy(SPEC, FixedJudge(1.0), UNRESTRICTED, 1000, rng)
    uninformed = cell_accuracy(SPEC, FixedJudge(0.5), UNRESTRICTED, 1000, rng)
    assert perfect.mean >= uninformed.mean


@pytest.mark.parametrize("p_j", [0.1, 0.3, 0.8])
def test_mirrored_judges_pair_to_one(p_j):
    rng = RandomStream(12)
    a = cell_accuracy(SPEC, FixedJudge(p_j), UNRESTRICTED, 400, rng)
    b = cell_accuracy(SPEC, FixedJudge(1.0 - p_j), UNRESTRICTED, 400, rng)
    assert a.mean + b.mean == pytest.approx(1.0, abs=1e-9)


def test_narrow_expert_distribution_approaches_fixed_panel():
    narrow = TruncatedNormalSpec(0.6, 1e-4)
    estimate = cell_accuracy(narrow, FixedJudge(0.6), UNRESTRICTED, 300, RandomStream(13))
    assert estimate.mean == pytest.approx(exact_accuracy([0.6] * 5, [1.0] * 5), abs=1e-3)


def test_estimate_fields():
    rng = RandomStream(14)
    estimate = cell_accuracy(SPEC, FixedJudge(0.8), UNRESTRICTED, 250, rng, block_size=64)
    assert estimate.trials == 250
    assert 0.0 <= estimate.mean <= 1.0
    assert estimate.stderr > 0.0


def test_single_trial_has_zero_stderr():
    estimate = cell_accuracy(SPEC, FixedJudge(0.8), UNRESTRICTED, 1, RandomStream(15))
    assert estimate.stderr == 0.0


def test_exact_and_simulated_modes_agree():
    rng = RandomStream(16)
    exact = cell_accuracy(SPEC, FixedJudge(0.8), UNRESTRICTED, 4000, rng)
    simulated = cell_accuracy(
        SPEC, FixedJudge(0.8), UNRESTRICTED, 4000, rng, mode=EvaluationMode.SIMULATED
    )
    bound = 3 * (exact.stderr**2 + simulated.stderr**2) ** 0.5
    assert abs(exact.mean - simulated.mean) <= bound


def test_sampled_judges_with_tight_spread_match_single_judge():
    rng = RandomStream(17)
    judges = SampledJudges(TruncatedNormalSpec(0.6, 1e-6), 10)
    many = cell_accuracy(SPEC, judges, UNRESTRICTED, 300, rng)
    one = cell_accuracy(SPEC, FixedJudge(0.6), UNRESTRICTED, 300, rng)
    assert many.mean == pytest.approx(one.mean, abs=2e-3)


def test_cell_rejects_zero_trials():
    with pytest.raises(ConfigError):
        cell_accuracy(SPEC, FixedJudge(0.8), UNRESTRICTED, 0, RandomStream(1))


# ── Sweeps ───────────────────────────────────────────────────────────────────


def test_single_judge_sweep_cell_order():
    result = single_judge_sweep(_small_single())
    coords = [(r.sigma_E, r.mu_E, r.judge_param1) for r in result.records]
    assert coords == [(0.1, 0.6, 0.5), (0.1, 0.6, 1.0), (0.1, 0.8, 0.5), (0.1, 0.8, 1.0)]
    assert all(r.judge_param2 is None for r in result.records)
    assert all(r.seed == 1 and r.trials == 200 for r in result.records)


def test_single_judge_sweep_independent_of_threads():
    config = _small_single()
    serial = single_judge_sweep(config, threads=1)
    assert serial.records == single_judge_sweep(config, threads=3).records


def test_multi_judge_sweep_records():
    result = multi_judge_sweep(_small_multi())
    assert len(result) == 4
    assert {(r.judge_param1, r.judge_param2) for r in result.records} == {(0.5, 0.1), (0.7, 0.1)}
    assert all(0.0 <= r.accuracy_mean <= 1.0 for r in result.records)


def test_multi_judge_sweep_independent_of_threads():
    config = _small_multi(WeightPolicy.NORMALIZED)
    serial = multi_judge_sweep(config, threads=1)
    assert serial.records == multi_judge_sweep(config, threads=4).records


def test_run_sweep_dispatches_on_judge_axis():
    assert run_sweep(_small_multi()).config.judge_axis is JudgeAxis.SAMPLED
    assert run_sweep(_small_single()).records == single_judge_sweep(_small_single()).records


def test_sweeps_reject_mismatched_axis():
    with pytest.raises(ConfigError):
        single_judge_sweep(_small_multi())
    with pytest.raises(ConfigError):
        multi_judge_sweep(_small_single())


def test_unsamplable_cell_names_its_coordinates():
    config = _small_single(expert_mu_grid=[-5.0], trials=5)
    with pytest.raises(CellError) as info:
        single_judge_sweep(config)
    assert "mu_E=-5.0" in str(info.value)
    assert info.value.cell["sigma_E"] == 0.1


def test_baseline_sweep_optimal_never_below_majority():
    records = baseline_sweep(_small_single(trials=300))
    assert len(records) == 2
    assert all(r.optimal.mean >= r.majority.mean - 1e-12 for r in records)


# ── Judge curve ──────────────────────────────────────────────────────────────


def test_judge_curve_endpoints_and_example_judge():
    curve = dict(judge_curve(PANEL, 101))
    assert len(curve) == 101
    assert curve[1.0] == pytest.approx(0.9, abs=1e-9)
    assert curve[0.0] == pytest.approx(0.1, abs=1e-9)
    nearest = min(curve, key=lambda p: abs(p - 0.6))
    assert curve[nearest] == pytest.approx(0.898, abs=0.0005)


def test_judge_curve_mirror_symmetry():
    points = judge_curve(PANEL, 101)
    for (p, a), (q, b) in zip(points, reversed(points)):
        if abs(p - 0.5) > 1e-9:
            assert a + b == pytest.approx(1.0, abs=1e-9), (p, q)


def test_judge_curve_resolution_two():
    assert [p for p, _ in judge_curve(PANEL, 2)] == [0.0, 1.0]


def test_judge_curve_rejects_resolution_one():
    with pytest.raises(ConfigError):
        judge_curve(PANEL, 1)


# ── Summaries ────────────────────────────────────────────────────────────────


def _result(policy: WeightPolicy, means) -> SweepResult:
    records = tuple(
        SweepRecord(0.1, 0.5, 0.5, 0.1, policy, 10, 1, EvaluationMode.EXACT, m, 0.01)
        for m in means
    )
    return SweepResult(_small_multi(policy), records)


def test_grid_mean_and_policy_gaps():
    results = {
        WeightPolicy.UNRESTRICTED: _result(WeightPolicy.UNRESTRICTED, [0.8, 0.9]),
        WeightPolicy.NON_NEGATIVE: _result(WeightPolicy.NON_NEGATIVE, [0.7, 0.8]),
        WeightPolicy.NORMALIZED: _result(WeightPolicy.NORMALIZED, [0.7, 0.78]),
    }
    assert grid_mean(results[WeightPolicy.UNRESTRICTED]) == pytest.approx(0.85)
    gaps = policy_gaps(results)
    assert gaps[(WeightPolicy.UNRESTRICTED, WeightPolicy.NON_NEGATIVE)] == pytest.approx(0.1)
    assert gaps[(WeightPolicy.NON_NEGATIVE, WeightPolicy.NORMALIZED)] == pytest.approx(0.01)


# ── Full grids ───────────────────────────────────────────────────────────────


@pytest.mark.slow
def test_default_single_judge_grid_qualitative_shape():
    result = single_judge_sweep(SweepConfig.single_judge(), threads=4)
    assert len(result) == 360
    cells = {(r.sigma_E, r.mu_E, r.judge_param1): r for r in result.records}
    for (sigma, mu, p_j), record in cells.items():
        if p_j == 1.0:
            half = cells[(sigma, mu, 0.5)]
            assert record.accuracy_mean >= half.accuracy_mean - 2 * half.accuracy_stderr


@pytest.mark.slow
def test_default_multi_judge_grid_policy_ordering():
    results = {
        policy: multi_judge_sweep(SweepConfig.multi_judge(policy), threads=4)
        for policy in WeightPolicy
    }
    assert all(len(result) == 324 for result in results.values())
    gaps = policy_gaps(results)
    restriction_gap = gaps[(WeightPolicy.UNRESTRICTED, WeightPolicy.NON_NEGATIVE)]
    assert restriction_gap >= 0.0
    assert abs(gaps[(WeightPolicy.NON_NEGATIVE, WeightPolicy.NORMALIZED)]) < restriction_gap / 2
