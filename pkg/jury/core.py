"""Weighted majority rules over binary votes.

A rule is a real weight per expert. A profile elects 1 when the weight mass
on votes for 1 exceeds the mass on votes for 0, elects 0 when it falls short,
and ties otherwise. The two masses are accumulated with Neumaier compensated
summation over the experts in index order and compared exactly, so tie
detection does not depend on how the caller ordered or batched profiles.

Everything here is a pure function of its inputs plus an explicitly passed
`RandomStream`. Exact evaluation enumerates all 2^m profiles in chunks;
beyond the enumeration bounds callers get a `CapacityError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .enums import Decision, Outcome, ZeroWeightFallback
from .errors import CapacityError, DimensionError, DomainError, JuryInputError

if TYPE_CHECKING:  # pragma: no cover
    from .sampling import RandomStream

MAX_ACCURACY_EXPERTS = 25
MAX_COALITION_EXPERTS = 20
# max |w| below which a weight vector counts as all-zero
ZERO_WEIGHT_EPS = 1e-12
TIE_CREDIT = 0.5

# Upper bound on elements of one (trials, profiles, experts) work array.
_WORK_ELEMENTS = 1 << 22
_SIM_CHUNK = 1 << 16


# ── Domain types ─────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class CompetencePanel:
    """Per-agent probabilities of voting correctly.

    Expert panels hold values strictly inside (0, 1); judge panels allow the
    closed interval [0, 1].
    """

    probs: tuple[float, ...]
    role: str = "expert"

    def __post_init__(self) -> None:
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if self.role not in ("expert", "judge"):
            raise JuryInputError(f"unknown panel role {self.role!r}")
        if not probs:
            raise DimensionError(f"{self.role} panel must hold at least one competence")
        for index, p in enumerate(probs):
            if not math.isfinite(p):
                raise JuryInputError(f"{self.role} competence #{index} is not finite: {p}")
            if self.role == "expert" and not 0.0 < p < 1.0:
                raise DomainError(f"expert competence #{index}={p} must lie in (0, 1)")
            if self.role == "judge" and not 0.0 <= p <= 1.0:
                raise DomainError(f"judge competence #{index}={p} must lie in [0, 1]")

    @classmethod
    def experts(cls, probs: Iterable[float]) -> "CompetencePanel":
        return cls(tuple(probs), "expert")

    @classmethod
    def judges(cls, probs: Iterable[float]) -> "CompetencePanel":
        return cls(tuple(probs), "judge")

    def __len__(self) -> int:
        return len(self.probs)

    def __iter__(self) -> Iterator[float]:
        return iter(self.probs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=np.float64)


@dataclass(frozen=True)
class WeightVector:
    """One finite vote weight per expert; defines a weighted majority rule."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if not weights:
            raise DimensionError("weight vector must hold at least one weight")
        for index, w in enumerate(weights):
            if not math.isfinite(w):
                raise JuryInputError(f"weight #{index} is not finite: {w}")

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self) -> Iterator[float]:
        return iter(self.weights)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.float64)

    def is_all_zero(self) -> bool:
        return max(abs(w) for w in self.weights) < ZERO_WEIGHT_EPS


@dataclass(frozen=True)
class VoteProfile:
    """One binary vote per expert; 1 is the correct alternative."""

    votes: tuple[int, ...]

    def __post_init__(self) -> None:
        votes = tuple(int(v) for v in self.votes)
        object.__setattr__(self, "votes", votes)
        if any(v not in (0, 1) for v in votes):
            raise JuryInputError(f"votes must be 0 or 1, got {votes}")

    def __len__(self) -> int:
        return len(self.votes)


PanelLike = Union[CompetencePanel, Sequence[float], np.ndarray]
WeightsLike = Union[WeightVector, Sequence[float], np.ndarray]
ProfileLike = Union[VoteProfile, Sequence[int], np.ndarray]


@dataclass(frozen=True, eq=False)
class CoalitionStructure:
    """Outcome of every expert subset voting 1 against the rest.

    ``codes[mask]`` is +1 (Win), -1 (Lose) or 0 (Tie) for the subset whose
    members are the set bits of ``mask`` (bit e is expert e, zero-based).
    """

    size: int
    codes: np.ndarray = field(repr=False)

    def outcome(self, subset: Iterable[int]) -> Outcome:
        return _CODE_TO_OUTCOME[int(self.codes[_mask_of(subset, self.size)])]

    def as_dict(self) -> dict[frozenset, Outcome]:
        return {
            frozenset(_members(mask, self.size)): _CODE_TO_OUTCOME[int(code)]
            for mask, code in enumerate(self.codes)
        }

    def winning(self) -> list[tuple[int, ...]]:
        """All winning subsets, ordered by size then members."""
        masks = np.flatnonzero(self.codes == 1)
        return sorted((_members(int(m), self.size) for m in masks), key=lambda s: (len(s), s))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoalitionStructure):
            return NotImplemented
        return self.size == other.size and np.array_equal(self.codes, other.codes)

    def __hash__(self) -> int:
        return hash((self.size, self.codes.tobytes()))


_CODE_TO_OUTCOME = {1: Outcome.WIN, -1: Outcome.LOSE, 0: Outcome.TIE}
_CODE_TO_DECISION = {1: Decision.ONE, -1: Decision.ZERO, 0: Decision.TIE}


# ── Coercion helpers ─────────────────────────────────────────────────────────


def expert_array(panel: PanelLike) -> np.ndarray:
    """Competences of an expert panel as a float array; validates raw sequences."""
    if not isinstance(panel, CompetencePanel):
        panel = CompetencePanel.experts(np.asarray(panel, dtype=np.float64).ravel())
    elif panel.role != "expert":
        raise DomainError("accuracy is defined for expert panels only")
    return panel.as_array()


def weight_array(weights: WeightsLike) -> np.ndarray:
    """Weights as a finite float array."""
    if not isinstance(weights, WeightVector):
        weights = WeightVector(tuple(np.asarray(weights, dtype=np.float64).ravel()))
    return weights.as_array()


def _mask_of(subset: Iterable[int], size: int) -> int:
    mask = 0
    for e in subset:
        if not 0 <= e < size:
            raise DimensionError(f"expert index {e} outside 0..{size - 1}")
        mask |= 1 << e
    return mask


def _members(mask: int, size: int) -> tuple[int, ...]:
    return tuple(e for e in range(size) if mask >> e & 1)


def _profile_bits(start: int, stop: int, size: int) -> np.ndarray:
    """Rows are the vote profiles for bitmasks start..stop-1 (bit e is expert e)."""
    masks = np.arange(start, stop, dtype=np.int64)
    return ((masks[:, None] >> np.arange(size, dtype=np.int64)) & 1).astype(bool)


# ── Decision engine ──────────────────────────────────────────────────────────


def _neumaier_sum(terms: np.ndarray) -> np.ndarray:
    """Compensated sum over the last axis, in index order."""
    total = np.zeros(terms.shape[:-1], dtype=np.float64)
    compensation = np.zeros_like(total)
    for k in range(terms.shape[-1]):
        term = terms[..., k]
        running = total + term
        compensation += np.where(
            np.abs(total) >= np.abs(term), (total - running) + term, (term - running) + total
        )
        total = running
    return total + compensation


def _compare(weights: np.ndarray, votes: np.ndarray) -> np.ndarray:
    """+1 / -1 / 0 per profile: mass on 1 greater, smaller, or equal to mass on 0."""
    mass_one = _neumaier_sum(np.where(votes, weights, 0.0))
    mass_zero = _neumaier_sum(np.where(votes, 0.0, weights))
    return (mass_one > mass_zero).astype(np.int8) - (mass_one < mass_zero).astype(np.int8)


def _effective_weights(
    weights: np.ndarray, fallback: ZeroWeightFallback
) -> tuple[np.ndarray, np.ndarray]:
    """Apply the all-zero fallback row-wise.

    Returns the weights to compare with and a boolean mask of rows whose every
    profile ties (the coin-flip reading of an all-zero vector).
    """
    fallback = ZeroWeightFallback(fallback)
    degenerate = np.max(np.abs(weights), axis=-1) < ZERO_WEIGHT_EPS
    if not degenerate.any():
        return weights, np.zeros(degenerate.shape, dtype=bool)
    if fallback is ZeroWeightFallback.MAJORITY:
        return np.where(degenerate[..., None], 1.0, weights), np.zeros(degenerate.shape, dtype=bool)
    return weights, degenerate


def decide(
    weights: WeightsLike,
    profile: ProfileLike,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> Decision:
    """Apply the weighted majority rule to one vote profile."""
    w = weight_array(weights)
    if not isinstance(profile, VoteProfile):
        profile = VoteProfile(tuple(np.asarray(profile).ravel()))
    if len(profile) != w.size:
        raise DimensionError(f"{w.size} weights but {len(profile)} votes")
    w, always_tie = _effective_weights(w, fallback)
    if always_tie:
        return Decision.TIE
    votes = np.asarray(profile.votes, dtype=bool)
    return _CODE_TO_DECISION[int(_compare(w, votes))]


def _check_pair(panels: np.ndarray, weights: np.ndarray) -> None:
    if panels.shape != weights.shape:
        raise DimensionError(f"panels {panels.shape} and weights {weights.shape} differ in shape")
    if not np.all(np.isfinite(weights)):
        raise JuryInputError("weights must be finite")
    if not np.all((panels > 0.0) & (panels < 1.0)):
        raise DomainError("expert competences must lie in (0, 1)")


def exact_accuracy_batch(
    panels: np.ndarray,
    weights: np.ndarray,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> np.ndarray:
    """Exact accuracy of each weight row against the panel row beside it.

    Args:
        panels: ``(T, m)`` expert competences, each in (0, 1).
        weights: ``(T, m)`` finite weights.
        fallback: Reading of all-zero weight rows.

    Returns:
        ``(T,)`` probabilities that the rule elects 1, ties credited 0.5.

    Raises:
        CapacityError: If m exceeds `MAX_ACCURACY_EXPERTS`.
    """
    panels = np.atleast_2d(np.asarray(panels, dtype=np.float64))
    weights = np.atleast_2d(np.asarray(weights, dtype=np.float64))
    _check_pair(panels, weights)
    trials, size = panels.shape
    if size > MAX_ACCURACY_EXPERTS:
        raise CapacityError(
            "exact_accuracy", size, MAX_ACCURACY_EXPERTS, "use simulate_accuracy instead"
        )

    weights, always_tie = _effective_weights(weights, fallback)
    profiles = 1 << size
    chunk = max(1, min(profiles, _WORK_ELEMENTS // max(1, trials * size)))
    accuracy = np.zeros(trials, dtype=np.float64)
    for start in range(0, profiles, chunk):
        bits = _profile_bits(start, min(profiles, start + chunk), size)
        signs = _compare(weights[:, None, :], bits[None, :, :])
        prob = np.where(
            bits[None, :, :], panels[:, None, :], 1.0 - panels[:, None, :]
        ).prod(axis=-1)
        credit = np.where(signs > 0, 1.0, np.where(signs == 0, TIE_CREDIT, 0.0))
        accuracy += (prob * credit).sum(axis=-1)
    accuracy[always_tie] = TIE_CREDIT
    return np.clip(accuracy, 0.0, 1.0)


def exact_accuracy(
    panel: PanelLike,
    weights: WeightsLike,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> float:
    """Probability the rule elects the correct alternative, by enumerating all 2^m profiles."""
    p = expert_array(panel)
    w = weight_array(weights)
    if p.size != w.size:
        raise DimensionError(f"{p.size} experts but {w.size} weights")
    if p.size > MAX_ACCURACY_EXPERTS:
        raise CapacityError(
            "exact_accuracy", p.size, MAX_ACCURACY_EXPERTS, "use simulate_accuracy instead"
        )
    return float(exact_accuracy_batch(p[None, :], w[None, :], fallback)[0])


def simulate_accuracy(
    panel: PanelLike,
    weights: WeightsLike,
    trials: int,
    rng: "RandomStream",
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> float:
    """Monte Carlo accuracy: fraction of simulated elections electing 1.

    Each trial draws every vote independently (1 with probability p_e),
    decides, and settles ties with a fair coin from ``rng``.
    """
    if trials < 1:
        raise JuryInputError(f"trials must be at least 1, got {trials}")
    p = expert_array(panel)
    w = weight_array(weights)
    if p.size != w.size:
        raise DimensionError(f"{p.size} experts but {w.size} weights")
    correct = 0
    for start in range(0, trials, _SIM_CHUNK):
        n = min(_SIM_CHUNK, trials - start)
        rows = np.broadcast_to(p, (n, p.size))
        correct += int(np.count_nonzero(simulate_elections(rows, w, rng, fallback)))
    return correct / trials


def simulate_elections(
    panels: np.ndarray,
    weights: np.ndarray,
    rng: "RandomStream",
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> np.ndarray:
    """One simulated election per panel row; True where the outcome is correct.

    Votes for all rows are drawn first, then one tie-breaking coin per row.
    ``weights`` is either one row shared by every election or one row each.
    """
    panels = np.atleast_2d(panels)
    weights, always_tie = _effective_weights(np.asarray(weights, dtype=np.float64), fallback)
    trials = panels.shape[0]
    votes = rng.random(panels.shape) < panels
    coins = rng.random(trials) < 0.5
    signs = _compare(weights, votes)
    signs = np.where(np.broadcast_to(always_tie, (trials,)), 0, signs)
    return (signs > 0) | ((signs == 0) & coins)


# ── Coalitions ───────────────────────────────────────────────────────────────


def _check_structure(codes: np.ndarray, size: int, monotone: bool) -> None:
    masks = np.arange(codes.size, dtype=np.int64)
    full = codes.size - 1
    assert np.array_equal(codes[full ^ masks], -codes), "complement consistency violated"
    if monotone:
        for e in range(size):
            without = masks[(masks >> e & 1) == 0]
            wins = without[codes[without] == 1]
            assert np.all(codes[wins | (1 << e)] == 1), "coalition monotonicity violated"


def coalition_structure(
    weights: WeightsLike,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> CoalitionStructure:
    """Record the decision for every subset of experts voting 1.

    Complement consistency is asserted on every call; monotonicity is
    asserted whenever no effective weight is negative (a negative weight makes
    joining the 1-voters hurt the coalition).
    """
    w = weight_array(weights)
    size = w.size
    if size > MAX_COALITION_EXPERTS:
        raise CapacityError("coalition_structure", size, MAX_COALITION_EXPERTS)
    w, always_tie = _effective_weights(w, fallback)
    subsets = 1 << size
    codes = np.zeros(subsets, dtype=np.int8)
    if not always_tie:
        chunk = max(1, _WORK_ELEMENTS // size)
        for start in range(0, subsets, chunk):
            stop = min(subsets, start + chunk)
            codes[start:stop] = _compare(w, _profile_bits(start, stop, size))
    codes.setflags(write=False)
    if __debug__:
        _check_structure(codes, size, monotone=bool(np.all(w >= 0)))
    return CoalitionStructure(size, codes)


def rules_equivalent(
    w1: WeightsLike,
    w2: WeightsLike,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> bool:
    """True iff both weightings produce the same outcome for every coalition."""
    a = weight_array(w1)
    b = weight_array(w2)
    if a.size != b.size:
        raise DimensionError(f"{a.size} weights compared against {b.size}")
    return coalition_structure(a, fallback) == coalition_structure(b, fallback)


def winning_coalitions(
    weights: WeightsLike,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> list[tuple[int, ...]]:
    """Minimal winning coalitions: winning subsets that lose or tie once any member leaves."""
    structure = coalition_structure(weights, fallback)
    codes = structure.codes
    minimal = []
    for subset in structure.winning():
        mask = _mask_of(subset, structure.size)
        if all(codes[mask & ~(1 << e)] != 1 for e in subset):
            minimal.append(subset)
    return minimal


def dictator(
    weights: WeightsLike,
    fallback: ZeroWeightFallback = ZeroWeightFallback.MAJORITY,
) -> Optional[int]:
    """Lowest-index expert whose lone vote for 1 beats everyone else, or None."""
    w = weight_array(weights)
    w, always_tie = _effective_weights(w, fallback)
    if always_tie:
        return None
    for e in range(w.size):
        alone = np.zeros(w.size, dtype=bool)
        alone[e] = True
        if _compare(w, alone) == 1:
            return e
    return None
