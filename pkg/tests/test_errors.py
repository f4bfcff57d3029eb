"""Tests for the error taxonomy and the sweep-cell failure translation."""

from __future__ import annotations

import pathlib
import sys

import pytest

REPO_ROOT = str(pathlib.Path(__file__).resolve().parents[1])
if REPO_ROOT not in sys.path:
    sys.path.insert(0, REPO_ROOT)

from jury.errors import (
    CapacityError,
    CellError,
    ConfigError,
    DimensionError,
    DomainError,
    JuryError,
    JuryInputError,
    ManifestError,
    RegressionFailure,
    SamplingError,
    cell_failure_context,
)


@pytest.mark.parametrize(
    "cls", [DomainError, DimensionError, JuryInputError, CapacityError, ConfigError, ManifestError]
)
def test_every_error_is_a_jury_error(cls):
    assert issubclass(cls, JuryError)


def test_input_errors_are_value_errors():
    assert issubclass(DomainError, ValueError)
    assert issubclass(DimensionError, JuryInputError)
    assert issubclass(ConfigError, ValueError)
    assert not issubclass(RegressionFailure, ValueError)


def test_capacity_error_carries_size_and_bound():
    exc = CapacityError("exact_accuracy", 30, 25, "use simulate_accuracy")
    assert (exc.size, exc.bound) == (30, 25)
    assert str(exc) == (
        "exact_accuracy: m=30 exceeds the enumeration bound of 25; use simulate_accuracy"
    )


def test_config_error_names_field():
    exc = ConfigError("trials", "must be at least 1")
    assert exc.field == "trials"
    assert str(exc) == "trials: must be at least 1"


def test_cell_context_translates_sampling_errors():
    with pytest.raises(CellError) as info:
        with cell_failure_context(sigma_E=0.1, mu_E=-5.0, sigma_J=None):
            raise SamplingError("no mass inside (0.1, 0.9)")
    exc = info.value
    assert exc.cell == {"sigma_E": 0.1, "mu_E": -5.0, "sigma_J": None}
    assert str(exc) == "cell sigma_E=0.1 mu_E=-5.0 failed: no mass inside (0.1, 0.9)"
    assert isinstance(exc.__cause__, SamplingError)
    assert isinstance(exc, SamplingError)


def test_cell_context_passes_cell_errors_through():
    inner = CellError({"mu_E": 0.3}, SamplingError("x"))
    with pytest.raises(CellError) as info:
        with cell_failure_context(mu_E=0.9):
            raise inner
    assert info.value is inner


def test_cell_context_leaves_other_errors_alone():
    with pytest.raises(DomainError):
        with cell_failure_context(mu_E=0.5):
            raise DomainError("p must lie in (0, 1)")
