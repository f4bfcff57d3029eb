"""Tests for reproducible random streams and truncated-normal panel sampling.

Draw-level determinism is the contract every sweep result rests on: the same
(seed, path) must always yield the same sequence, and deriving a child stream
must never disturb its parent.
"""

from __future__ import annotations

import pathlib
import sys

import numpy as np
import pytest
from scipy import stats

REPO_ROOT = str(pathlib.Path(__file__).resolve().parents[1])
if REPO_ROOT not in sys.path:
    sys.path.insert(0, REPO_ROOT)

from jury.errors import DomainError, JuryInputError, SamplingError
from jury.sampling import (
    RandomStream,
    TruncatedNormalSpec,
    derive_substream,
    sample_panel,
    sample_truncated_normal,
    sample_truncated_normal_batch,
)

EXPERT_SPEC = TruncatedNormalSpec(0.5, 0.1)


# ── RandomStream ─────────────────────────────────────────────────────────────


def test_same_seed_and_path_give_same_sequence():
    a = RandomStream(42, (3, 7)).random(10)
    b = RandomStream(42, (3, 7)).random(10)
    assert np.array_equal(a, b)


def test_distinct_paths_give_distinct_sequences():
    root = RandomStream(42)
    assert not np.array_equal(root.derive((0,)).random(10), root.derive((1,)).random(10))


def test_derivation_is_pure():
    parent = RandomStream(5)
    before = RandomStream(5).random(4)
    derive_substream(parent, (3, 7))
    assert parent.path == ()
    assert np.array_equal(parent.random(4), before)


def test_nested_derivation_appends_path():
    child = RandomStream(1).derive((2,)).derive((3, 4))
    assert child.path == (2, 3, 4)
    assert np.array_equal(child.random(3), RandomStream(1, (2, 3, 4)).random(3))


def test_iteration_order_does_not_change_draws():
    root = RandomStream(99)
    cell_major = {(c, t): root.derive((c, t)).random() for c in range(3) for t in range(4)}
    trial_major = {(c, t): root.derive((c, t)).random() for t in range(4) for c in range(3)}
    assert cell_major == trial_major


@pytest.mark.parametrize("seed, path", [(-1, ()), (1 << 64, ()), (0, (-2,))])
def test_stream_rejects_invalid_seed_or_path(seed, path):
    with pytest.raises(JuryInputError):
        RandomStream(seed, path)


def test_repr_names_seed_and_path():
    assert repr(RandomStream(7, (1,))) == "RandomStream(seed=7, path=(1,))"


# ── Truncated normal ─────────────────────────────────────────────────────────


@pytest.mark.parametrize(
    "kwargs",
    [
        {"mu": 0.5, "sigma": 0.0},
        {"mu": 0.5, "sigma": -1.0},
        {"mu": 0.5, "sigma": 0.1, "lo": 0.9, "hi": 0.1},
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(DomainError):
        TruncatedNormalSpec(**kwargs)


def test_single_draw_inside_bounds():
    value = sample_truncated_normal(EXPERT_SPEC, RandomStream(1))
    assert 0.1 < value < 0.9


def test_batch_stays_strictly_inside_bounds():
    draws = sample_truncated_normal_batch(TruncatedNormalSpec(0.9, 0.4), 50_000, RandomStream(2))
    assert draws.shape == (50_000,)
    assert np.all((draws > 0.1) & (draws < 0.9))


def test_symmetric_truncation_preserves_mean():
    draws = sample_truncated_normal_batch(EXPERT_SPEC, 100_000, RandomStream(3))
    assert abs(draws.mean() - 0.5) < 0.005


def test_truncation_pulls_mean_inside_interval():
    draws = sample_truncated_normal_batch(TruncatedNormalSpec(0.9, 0.4), 20_000, RandomStream(4))
    assert draws.mean() < 0.9


@pytest.mark.parametrize("mu, sigma", [(0.5, 0.1), (0.2, 0.4), (0.8, 0.3)])
def test_draws_match_truncated_normal_cdf(mu, sigma):
    n = 100_000
    draws = sample_truncated_normal_batch(TruncatedNormalSpec(mu, sigma), n, RandomStream(8))
    a, b = (0.1 - mu) / sigma, (0.9 - mu) / sigma
    result = stats.kstest(draws, stats.truncnorm(a, b, loc=mu, scale=sigma).cdf)
    # 1% critical value of the one-sample KS statistic
    assert result.statistic < 1.628 / np.sqrt(n)


def test_unreachable_interval_raises_sampling_error():
    spec = TruncatedNormalSpec(0.0, 0.01, lo=0.8, hi=0.9)
    with pytest.raises(SamplingError):
        sample_truncated_normal_batch(spec, 3, RandomStream(5))


def test_batch_requires_positive_size():
    with pytest.raises(JuryInputError):
        sample_truncated_normal_batch(EXPERT_SPEC, 0, RandomStream(5))


# ── Panels ───────────────────────────────────────────────────────────────────


def test_expert_panel_of_five():
    panel = sample_panel(5, EXPERT_SPEC, RandomStream(6))
    assert len(panel) == 5
    assert panel.role == "expert"
    assert all(0.1 < p < 0.9 for p in panel)


def test_judge_panel_of_ten():
    panel = sample_panel(10, TruncatedNormalSpec(0.6, 0.4), RandomStream(6), role="judge")
    assert len(panel) == 10
    assert panel.role == "judge"


def test_same_seed_gives_identical_panels():
    a = sample_panel(5, EXPERT_SPEC, RandomStream(11, (4,)))
    b = sample_panel(5, EXPERT_SPEC, RandomStream(11, (4,)))
    assert a == b
