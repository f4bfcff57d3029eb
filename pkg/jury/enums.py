"""Enum definitions shared by the decision, weighting and sweep layers."""

from enum import Enum


class Decision(str, Enum):
    """Outcome of a weighted majority vote on a single profile."""

    ONE = "one"
    ZERO = "zero"
    TIE = "tie"


class Outcome(str, Enum):
    """Result of a coalition voting 1 while everyone else votes 0."""

    WIN = "win"
    LOSE = "lose"
    TIE = "tie"


class WeightPolicy(str, Enum):
    """Restriction applied to each judge's score row before averaging."""

    UNRESTRICTED = "unrestricted"
    NON_NEGATIVE = "nonneg"
    NORMALIZED = "normalized"


class EvaluationMode(str, Enum):
    """How a sweep cell turns an aggregated weighting into an accuracy."""

    EXACT = "exact"
    SIMULATED = "simulated"


class ZeroWeightFallback(str, Enum):
    """Reading of an all-zero weight vector."""

    # equal weights of 1, i.e. simple majority
    MAJORITY = "majority"
    # every profile ties and is settled by a fair coin
    COINFLIP = "coinflip"


class JudgeAxis(str, Enum):
    """Judge dimension of a sweep grid."""

    FIXED = "fixed"
    SAMPLED = "sampled"


class ThresholdKind(str, Enum):
    """Shape of an equivalence-threshold answer."""

    VALUE = "value"
    ALWAYS = "always"
    NEVER = "never"
