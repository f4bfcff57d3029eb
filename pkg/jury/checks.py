"""Self-checking property suites behind ``jury check`` and ``jury example1``.

Each suite returns a `SuiteReport` instead of raising, so the CLI can print a
per-suite summary and decide the exit status once every suite has run.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .core import (
    CompetencePanel,
    dictator,
    exact_accuracy,
    exact_accuracy_batch,
    winning_coalitions,
)
from .enums import EvaluationMode, WeightPolicy
from .errors import ConfigError
from .experiments import FixedJudge, cell_accuracy, judge_curve
from .sampling import RandomStream, TruncatedNormalSpec
from .weighting import (
    aggregate,
    equivalence_threshold,
    gm_deviation_alpha,
    judge_scores,
    log_odds_array,
    optimal_weights,
    perceived_scores,
    perceived_with_odds,
)

log = logging.getLogger("jury")

EXAMPLE1_PANEL = (0.6, 0.6, 0.6, 0.7, 0.9)
EXAMPLE1_JUDGE = 0.6
EXAMPLE1_WEIGHTS = (0.41, 0.41, 0.41, 0.85, 2.2)
EXAMPLE1_OPTIMAL = 0.9
EXAMPLE1_MAJORITY = 0.82
EXAMPLE1_JUDGED = 0.898
EXAMPLE1_THRESHOLD = 0.962

DEFAULT_EPSILON = 1e-9
# accuracy slack for the log-odds rule against challengers
OPTIMALITY_SLACK = 1e-12
CHECK_SEED = 2022


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, ok: bool, message: str) -> None:
        self.checked += 1
        if not ok and len(self.failures) < 10:
            self.failures.append(message)
        elif not ok:
            self.failures[-1] = f"{message} (and more)"

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} checks, {len(self.failures)} failed"


@dataclass(frozen=True)
class Example1Report:
    """Every number the worked example reports, computed exactly."""

    # pylint: disable=too-many-instance-attributes
    weights: tuple[float, ...]
    optimal_accuracy: float
    majority_accuracy: float
    judge_scores: tuple[float, ...]
    judge_accuracy: float
    threshold: float
    dictator: Optional[int]
    minimal_winning: tuple[tuple[int, ...], ...]

    def deviations(self) -> list[str]:
        """Human-readable differences from the reference values; empty when all match."""
        found = []
        rounded = tuple(round(w, 2) for w in self.weights)
        if rounded != EXAMPLE1_WEIGHTS:
            found.append(f"log-odds weights {rounded} != {EXAMPLE1_WEIGHTS}")
        targets = (
            ("log-odds accuracy", self.optimal_accuracy, EXAMPLE1_OPTIMAL, 1e-9),
            ("equal-weight accuracy", self.majority_accuracy, EXAMPLE1_MAJORITY, 5e-3),
            ("judge 0.6 accuracy", self.judge_accuracy, EXAMPLE1_JUDGED, 5e-4),
            ("equivalence threshold", self.threshold, EXAMPLE1_THRESHOLD, 1e-3),
        )
        for label, value, target, tolerance in targets:
            if abs(value - target) > tolerance:
                found.append(f"{label} {value:.6f} deviates from {target} by more than {tolerance}")
        return found


def example1_report() -> Example1Report:
    panel = CompetencePanel.experts(EXAMPLE1_PANEL)
    weights = optimal_weights(panel)
    judged = judge_scores(EXAMPLE1_JUDGE, panel)
    return Example1Report(
        weights=tuple(weights.weights),
        optimal_accuracy=exact_accuracy(panel, weights),
        majority_accuracy=exact_accuracy(panel, [1.0] * len(panel)),
        judge_scores=tuple(judged.weights),
        judge_accuracy=exact_accuracy(panel, judged),
        threshold=equivalence_threshold(panel).competence,
        dictator=dictator(weights),
        minimal_winning=tuple(winning_coalitions(weights)),
    )


# ── Suites ───────────────────────────────────────────────────────────────────


def check_example1(epsilon: float = DEFAULT_EPSILON) -> SuiteReport:
    """Reference values of the five-expert worked example."""
    report = SuiteReport("example1")
    result = example1_report()
    deviations = result.deviations()
    report.expect(not deviations, "; ".join(deviations))
    report.expect(result.dictator == 4, f"expected a dictator at expert 4, got {result.dictator}")
    curve = dict(judge_curve(EXAMPLE1_PANEL, 2))
    report.expect(abs(curve[1.0] - EXAMPLE1_OPTIMAL) <= epsilon, f"curve at p_j=1 is {curve[1.0]}")
    report.expect(
        abs(curve[0.0] - (1 - EXAMPLE1_OPTIMAL)) <= epsilon, f"curve at p_j=0 is {curve[0.0]}"
    )
    return report


def check_geometric_mean(
    epsilon: float = DEFAULT_EPSILON, constructions: int = 1000
) -> SuiteReport:
    """Judges whose geometric-mean perceived odds equal the true odds recover the log-odds rule."""
    report = SuiteReport("geometric-mean")
    rng = RandomStream(CHECK_SEED).derive((1,))
    for k in range(constructions):
        gen = rng.derive((k,)).generator
        experts = int(gen.integers(1, 8))
        judges = int(gen.integers(1, 11))
        truth = gen.uniform(0.3, 0.7, experts)
        perceived = np.column_stack(
            [perceived_with_odds(p, gen.uniform(0.35, 0.65, judges - 1)) for p in truth]
        )
        got = aggregate(perceived_scores(perceived)).as_array()
        want = optimal_weights(truth).as_array()
        gap = float(np.max(np.abs(got - want)))
        report.expect(gap <= epsilon, f"construction {k}: aggregated weights off by {gap:.3g}")
    return report


def check_alpha_shift(
    epsilon: float = DEFAULT_EPSILON, constructions: int = 1000
) -> SuiteReport:
    """Aggregated weight minus log-odds weight equals ln(alpha) expert by expert."""
    report = SuiteReport("alpha-shift")
    rng = RandomStream(CHECK_SEED).derive((2,))
    for k in range(constructions):
        gen = rng.derive((k,)).generator
        experts = int(gen.integers(1, 8))
        judges = int(gen.integers(1, 11))
        truth = gen.uniform(0.05, 0.95, experts)
        perceived = gen.uniform(0.05, 0.95, (judges, experts))
        got = aggregate(perceived_scores(perceived)).as_array() - optimal_weights(truth).as_array()
        alphas = np.array([gm_deviation_alpha(truth[e], perceived[:, e]) for e in range(experts)])
        gap = float(np.max(np.abs(got - np.log(alphas))))
        report.expect(gap <= epsilon, f"construction {k}: shift off ln(alpha) by {gap:.3g}")
    return report


def check_negation(epsilon: float = DEFAULT_EPSILON, panels: int = 200) -> SuiteReport:
    """A judge of competence 1-p_j reaches the complement of the accuracy p_j reaches."""
    report = SuiteReport("negation")
    for p_j, accuracy in judge_curve(EXAMPLE1_PANEL, 101):
        if abs(p_j - 0.5) < 1e-12:
            continue
        mirrored = exact_accuracy(EXAMPLE1_PANEL, judge_scores(1.0 - p_j, EXAMPLE1_PANEL))
        report.expect(
            abs(accuracy + mirrored - 1.0) <= epsilon,
            f"example panel at p_j={p_j:.2f}: {accuracy} + {mirrored} != 1",
        )
    rng = RandomStream(CHECK_SEED).derive((3,))
    for k in range(panels):
        gen = rng.derive((k,)).generator
        panel = gen.uniform(0.05, 0.95, int(gen.integers(1, 8)))
        p_j = float(gen.uniform(0.0, 1.0))
        a = exact_accuracy(panel, judge_scores(p_j, panel))
        b = exact_accuracy(panel, judge_scores(1.0 - p_j, panel))
        report.expect(abs(a + b - 1.0) <= epsilon, f"panel {k} at p_j={p_j:.4f}: {a} + {b} != 1")
    return report


def check_optimality(
    epsilon: float = OPTIMALITY_SLACK, panels: int = 500, challengers: int = 100
) -> SuiteReport:
    """No weight vector beats the log-odds rule on its own panel."""
    report = SuiteReport("optimality")
    rng = RandomStream(CHECK_SEED).derive((4,))
    for k in range(panels):
        gen = rng.derive((k,)).generator
        size = int(gen.integers(1, 6))
        panel = gen.uniform(0.05, 0.95, size)
        best = exact_accuracy(panel, log_odds_array(panel))
        rivals = gen.normal(0.0, 1.5, (challengers, size))
        rivals[0] = 1.0
        scores = exact_accuracy_batch(np.broadcast_to(panel, rivals.shape), rivals)
        worst = float(scores.max() - best)
        report.expect(worst <= epsilon, f"panel {k}: a challenger beats log-odds by {worst:.3g}")
    return report


def check_montecarlo(trials: int = 4000, sigmas: float = 3.0) -> SuiteReport:
    """Exact and simulated evaluation agree on a four-cell grid."""
    report = SuiteReport("montecarlo")
    master = RandomStream(CHECK_SEED).derive((5,))
    for index, (mu, sigma) in enumerate([(0.6, 0.1), (0.6, 0.4), (0.8, 0.1), (0.8, 0.4)]):
        spec = TruncatedNormalSpec(mu, sigma)
        rng = master.derive((index,))
        estimates = {
            mode: cell_accuracy(
                spec, FixedJudge(0.8), WeightPolicy.UNRESTRICTED, trials, rng, mode=mode
            )
            for mode in EvaluationMode
        }
        exact = estimates[EvaluationMode.EXACT]
        simulated = estimates[EvaluationMode.SIMULATED]
        bound = sigmas * math.hypot(exact.stderr, simulated.stderr)
        report.expect(
            abs(exact.mean - simulated.mean) <= bound,
            f"cell mu_E={mu} sigma_E={sigma}: "
            f"exact {exact.mean:.4f} vs simulated {simulated.mean:.4f}",
        )
    return report


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "example1": check_example1,
    "geometric-mean": check_geometric_mean,
    "alpha-shift": check_alpha_shift,
    "negation": check_negation,
    "optimality": check_optimality,
    "montecarlo": check_montecarlo,
}
# suites whose tolerance the --epsilon flag sets
_EPSILON_SUITES = {"example1", "geometric-mean", "alpha-shift", "negation"}
# older suite names still accepted by --suite
SUITE_ALIASES = {"theorem1": "geometric-mean", "corollary1": "alpha-shift"}


def run_suites(
    names: Optional[Iterable[str]] = None, epsilon: float = DEFAULT_EPSILON
) -> list[SuiteReport]:
    """Run the named suites (all when ``names`` is empty) in registry order."""
    wanted = [SUITE_ALIASES.get(name, name) for name in (names or SUITES)]
    unknown = [name for name in wanted if name not in SUITES]
    if unknown:
        choices = ", ".join(SUITES)
        raise ConfigError("suite", f"unknown suite(s) {', '.join(unknown)}; choose from {choices}")
    reports = []
    for name in SUITES:
        if name not in wanted:
            continue
        suite = SUITES[name]
        report = suite(epsilon) if name in _EPSILON_SUITES else suite()
        log.debug("suite %s: %s", name, report.summary())
        reports.append(report)
    return reports
