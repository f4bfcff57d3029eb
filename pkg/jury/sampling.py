"""Competence panels drawn from truncated normals on reproducible random streams.

A `RandomStream` is identified by a master seed and an index path. Its draws
come from a PCG64 generator keyed by ``SeedSequence(seed, spawn_key=path)``,
so two streams with the same seed and path produce the same sequence no matter
which thread creates them or in what order, and streams with different paths
are statistically independent. Deriving a child never touches the parent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import SEED_LIMIT
from .core import CompetencePanel
from .errors import DomainError, JuryInputError, SamplingError

DEFAULT_LO = 0.1
DEFAULT_HI = 0.9
# consecutive rejected candidates before a spec is declared unsamplable
MAX_CONSECUTIVE_REJECTIONS = 100_000
_MIN_BATCH = 64


class RandomStream:
    """Deterministic pseudo-random state addressed by ``(seed, path)``."""

    __slots__ = ("_seed", "_path", "_generator")

    def __init__(self, seed: int, path: Sequence[int] = ()) -> None:
        seed = int(seed)
        if not 0 <= seed < SEED_LIMIT:
            raise JuryInputError(f"seed must be an unsigned 64-bit integer, got {seed}")
        path = tuple(int(i) for i in path)
        if any(i < 0 for i in path):
            raise JuryInputError(f"substream indices must be non-negative, got {path}")
        self._seed = seed
        self._path = path
        self._generator: Optional[np.random.Generator] = None

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def path(self) -> tuple[int, ...]:
        return self._path

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            sequence = np.random.SeedSequence(self._seed, spawn_key=self._path)
            self._generator = np.random.Generator(np.random.PCG64(sequence))
        return self._generator

    def random(self, size=None):
        """Uniform draws on [0, 1)."""
        return self.generator.random(size)

    def normal(self, loc: float, scale: float, size=None):
        return self.generator.normal(loc, scale, size)

    def derive(self, path: Iterable[int]) -> "RandomStream":
        return derive_substream(self, path)

    def __repr__(self) -> str:
        return f"RandomStream(seed={self._seed}, path={self._path})"


def derive_substream(rng: RandomStream, path: Iterable[int]) -> RandomStream:
    """Child stream at ``rng.path + path``; pure, the parent is left as it was."""
    return RandomStream(rng.seed, rng.path + tuple(int(i) for i in path))


@dataclass(frozen=True)
class TruncatedNormalSpec:
    """N(mu, sigma) conditioned on the open interval (lo, hi)."""

    mu: float
    sigma: float
    lo: float = DEFAULT_LO
    hi: float = DEFAULT_HI

    def __post_init__(self) -> None:
        for name in ("mu", "sigma", "lo", "hi"):
            if not math.isfinite(getattr(self, name)):
                raise JuryInputError(f"{name} must be finite")
        if self.sigma <= 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not self.lo < self.hi:
            raise DomainError(f"truncation bounds must satisfy lo < hi, got ({self.lo}, {self.hi})")


def sample_truncated_normal_batch(
    spec: TruncatedNormalSpec, size: int, rng: RandomStream
) -> np.ndarray:
    """Draw ``size`` values by rejection, in the order candidates are accepted.

    Raises:
        SamplingError: After `MAX_CONSECUTIVE_REJECTIONS` candidates in a row
            fall outside (lo, hi).
    """
    if size < 1:
        raise JuryInputError(f"size must be at least 1, got {size}")
    accepted: list[np.ndarray] = []
    have = 0
    rejected_run = 0
    batch = max(_MIN_BATCH, 2 * size)
    while have < size:
        candidates = rng.normal(spec.mu, spec.sigma, batch)
        inside = (candidates > spec.lo) & (candidates < spec.hi)
        hits = np.flatnonzero(inside)
        if hits.size:
            if rejected_run + hits[0] >= MAX_CONSECUTIVE_REJECTIONS:
                break
            rejected_run = batch - 1 - int(hits[-1])
            take = candidates[hits[: size - have]]
            accepted.append(take)
            have += take.size
        else:
            rejected_run += batch
            if rejected_run >= MAX_CONSECUTIVE_REJECTIONS:
                break
        rate = max(hits.size / batch, 1e-3)
        batch = int(min(MAX_CONSECUTIVE_REJECTIONS, max(_MIN_BATCH, (size - have) * 1.2 / rate)))
    if have < size:
        raise SamplingError(
            f"{MAX_CONSECUTIVE_REJECTIONS} consecutive rejections sampling "
            f"N({spec.mu}, {spec.sigma}) on ({spec.lo}, {spec.hi})"
        )
    return np.concatenate(accepted)


def sample_truncated_normal(spec: TruncatedNormalSpec, rng: RandomStream) -> float:
    """One draw from ``spec``; strictly inside its bounds."""
    return float(sample_truncated_normal_batch(spec, 1, rng)[0])


def sample_panel(
    size: int, spec: TruncatedNormalSpec, rng: RandomStream, role: str = "expert"
) -> CompetencePanel:
    """``size`` independent competences from ``spec``."""
    return CompetencePanel(tuple(sample_truncated_normal_batch(spec, size, rng)), role)
