"""Command-line front end: ``jury {example1,curve,sweep,baseline,check}``.

Reports go to stdout, logs to stderr. Library errors are mapped onto exit
codes and logged as one line each; nothing here prints a stack trace for an
expected failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Sequence

from pydantic import ValidationError

from .checks import DEFAULT_EPSILON, SUITE_ALIASES, SUITES, example1_report, run_suites
from .config import Settings, get_settings
from .enums import EvaluationMode, WeightPolicy, ZeroWeightFallback
from .errors import (
    ConfigError,
    JuryError,
    JuryInputError,
    ManifestError,
    RegressionFailure,
)
from .experiments import baseline_sweep, judge_curve, run_sweep
from .logging import configure_logging, format_log_context, log_run_banner
from .output import (
    load_config_file,
    load_manifest,
    manifest_path_for,
    replay_path_for,
    sha256_file,
    write_baseline_csv,
    write_curve_csv,
    write_manifest,
    write_sweep_csv,
)
from .schemas.models import RunManifest, SweepConfig
from .version import __version__

log = logging.getLogger("jury")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_REGRESSION = 3
EXIT_IO = 4

EXAMPLE1_PANEL_TEXT = "0.6,0.6,0.6,0.7,0.9"
PRESETS = ("single", "multi")


# ── Config resolution ────────────────────────────────────────────────────────


def config_error(exc: ValidationError) -> ConfigError:
    """First pydantic error as a `ConfigError` naming its field."""
    first = exc.errors()[0]
    where = ".".join(str(part) for part in first.get("loc", ())) or "config"
    return ConfigError(where, first.get("msg", "invalid value"))


def resolve_config(
    preset: str,
    file_overrides: Optional[dict],
    flag_overrides: Optional[dict],
    settings: Settings,
) -> SweepConfig:
    """Flags over config file over ``JURY_*`` settings over preset defaults."""
    if preset not in PRESETS:
        raise ConfigError("preset", f"expected one of {', '.join(PRESETS)}, got {preset!r}")
    values: dict = {
        "master_seed": settings.seed,
        "zero_weight_fallback": settings.zero_weight_fallback,
        "block_size": settings.block_size,
    }
    values.update(file_overrides or {})
    values.update({k: v for k, v in (flag_overrides or {}).items() if v is not None})
    factory = SweepConfig.multi_judge if preset == "multi" else SweepConfig.single_judge
    try:
        return factory(**values)
    except ValidationError as exc:
        raise config_error(exc) from exc


def _config_from_args(args: argparse.Namespace, settings: Settings) -> SweepConfig:
    file_overrides = load_config_file(args.config) if args.config else None
    flags = {
        "master_seed": args.seed,
        "trials": args.trials,
        "policy": args.policy,
        "evaluation_mode": getattr(args, "mode", None),
        "zero_weight_fallback": args.zero_weight_fallback,
    }
    return resolve_config(args.preset, file_overrides, flags, settings)


def _parse_panel(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError("panel", f"expected comma-separated probabilities, got {text!r}") from exc


def _replay(args: argparse.Namespace) -> tuple[SweepConfig, Path, Optional[str]]:
    """Config, output path and recorded digest from ``--manifest``."""
    manifest = load_manifest(args.manifest)
    if manifest.command != args.command:
        raise ManifestError(
            f"manifest {args.manifest} records a {manifest.command!r} run, not {args.command!r}"
        )
    out = Path(args.out) if args.out else Path(manifest.csv_path)
    return manifest.config, out, manifest.csv_sha256


def _write_manifest(
    command: str, config: SweepConfig, out: Path, rows: int, threads: int
) -> Path:
    manifest = RunManifest(
        tool_version=__version__,
        command=command,
        config=config,
        master_seed=config.master_seed,
        timestamp=datetime.now(timezone.utc),
        evaluation_mode=config.evaluation_mode,
        policy=config.policy,
        zero_weight_fallback=config.zero_weight_fallback,
        csv_path=str(out),
        csv_sha256=sha256_file(out),
        rows=rows,
        threads=threads,
    )
    target = manifest_path_for(out)
    write_manifest(manifest, target)
    return target


def _verify_digest(out: Path, recorded: Optional[str]) -> None:
    if recorded is None:
        return
    digest = sha256_file(out)
    if digest != recorded:
        raise RegressionFailure(f"{out} differs from the manifest digest ({digest} != {recorded})")
    log.info("output matches recorded digest %s", digest[:12])


# ── Commands ─────────────────────────────────────────────────────────────────


def cmd_example1(args: argparse.Namespace, settings: Settings) -> int:
    """Print the worked example and fail if any number deviates from its reference."""
    del settings
    report = example1_report()
    if args.weights_only:
        print(",".join(f"{round(w, 2):g}" for w in report.weights))
    else:
        log_run_banner(command="example1")
        print(f"panel:                  {EXAMPLE1_PANEL_TEXT}")
        print(f"log-odds weights:       {', '.join(f'{w:.3f}' for w in report.weights)}")
        print(f"log-odds accuracy:      {report.optimal_accuracy:.6f}")
        print(f"equal-weight accuracy:  {report.majority_accuracy:.6f}")
        print(f"judge 0.6 scores:       {', '.join(f'{w:.3f}' for w in report.judge_scores)}")
        print(f"judge 0.6 accuracy:     {report.judge_accuracy:.6f}")
        print(f"equivalence threshold:  {report.threshold:.4f}")
        print(f"dictator:               {report.dictator}")
        print(f"minimal winning:        {list(report.minimal_winning)}")
    deviations = report.deviations()
    if deviations:
        raise RegressionFailure("; ".join(deviations))
    return EXIT_OK


def cmd_curve(args: argparse.Namespace, settings: Settings) -> int:
    """Exact accuracy of a single judge's weighting across judge competence."""
    fallback = args.zero_weight_fallback or settings.zero_weight_fallback
    log_run_banner(command="curve")
    points = judge_curve(_parse_panel(args.panel), args.resolution, fallback)
    rows = write_curve_csv(points, args.out)
    log.info("wrote %d rows to %s", rows, args.out)
    return EXIT_OK


def _sweep_like(
    args: argparse.Namespace,
    settings: Settings,
    run: Callable[[SweepConfig, int], object],
    write: Callable[[object, Path], int],
    default_out: str,
) -> int:
    threads = settings.threads if args.threads is None else args.threads
    if threads < 1:
        raise ConfigError("threads", "must be at least 1")
    recorded = None
    if args.manifest:
        config, out, recorded = _replay(args)
    else:
        config = _config_from_args(args, settings)
        out = Path(args.out or default_out)
    log_run_banner(
        command=args.command,
        seed=config.master_seed,
        threads=threads,
        policy=config.policy.value,
        mode=config.evaluation_mode.value,
    )
    result = run(config, threads)
    if recorded is not None:
        # the recorded CSV is replaced only on a digest match; its manifest never is
        scratch = replay_path_for(out)
        rows = write(result, scratch)
        _verify_digest(scratch, recorded)
        scratch.replace(out)
        log.info("replayed %s", format_log_context(rows=rows, csv=out))
        return EXIT_OK
    rows = write(result, out)
    manifest = _write_manifest(args.command, config, out, rows, threads)
    log.info("wrote %s", format_log_context(rows=rows, csv=out, manifest=manifest))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    """Run a single- or multi-judge sweep; write the CSV and its manifest."""
    return _sweep_like(args, settings, run_sweep, write_sweep_csv, "sweep.csv")


def cmd_baseline(args: argparse.Namespace, settings: Settings) -> int:
    """Log-odds and equal-weight accuracy over the expert grid."""
    return _sweep_like(args, settings, baseline_sweep, write_baseline_csv, "baseline.csv")


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    """Run the property suites; exit non-zero naming every violated property."""
    del settings
    log_run_banner(command="check")
    reports = run_suites(args.suite, args.epsilon)
    for report in reports:
        print(report.summary())
        for failure in report.failures:
            print(f"    {failure}")
    failed = [report.name for report in reports if not report.passed]
    if failed:
        raise RegressionFailure(f"failed suites: {', '.join(failed)}")
    return EXIT_OK


# ── Parser ───────────────────────────────────────────────────────────────────


def _add_sweep_flags(sub: argparse.ArgumentParser, with_policy: bool = True) -> None:
    sub.add_argument("--preset", choices=PRESETS, default="single", help="grid defaults")
    sub.add_argument("--config", help="flat key = value file of SweepConfig fields")
    sub.add_argument("--manifest", help="re-run the configuration recorded in a manifest")
    sub.add_argument("--seed", type=int, help="master seed (default: JURY_SEED)")
    sub.add_argument("--trials", type=int, help="trials per cell")
    if with_policy:
        sub.add_argument("--policy", choices=[p.value for p in WeightPolicy])
        sub.add_argument("--mode", choices=[m.value for m in EvaluationMode])
    sub.add_argument(
        "--zero-weight-fallback", choices=[f.value for f in ZeroWeightFallback]
    )
    sub.add_argument("--out", help="output CSV path")
    sub.add_argument("--threads", type=int, help="parallel cells (default: JURY_THREADS)")
    sub.set_defaults(policy=None, mode=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jury",
        description="Weighting binary-voting experts by imperfect judges.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", help="logging level (default: JURY_LOG_LEVEL or INFO)")
    commands = parser.add_subparsers(dest="command", required=True)

    example1 = commands.add_parser("example1", help="self-checking five-expert example")
    example1.add_argument("--weights-only", action="store_true")
    example1.set_defaults(handler=cmd_example1)

    curve = commands.add_parser("curve", help="exact accuracy against judge competence")
    curve.add_argument("--panel", default=EXAMPLE1_PANEL_TEXT, help="comma-separated competences")
    curve.add_argument("--resolution", type=int, default=101)
    curve.add_argument("--out", default="judge_curve.csv")
    curve.add_argument("--zero-weight-fallback", choices=[f.value for f in ZeroWeightFallback])
    curve.set_defaults(handler=cmd_curve)

    sweep = commands.add_parser("sweep", help="Monte Carlo accuracy heatmap grid")
    _add_sweep_flags(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    baseline = commands.add_parser("baseline", help="log-odds and equal-weight accuracy grid")
    _add_sweep_flags(baseline, with_policy=False)
    baseline.set_defaults(handler=cmd_baseline)

    check = commands.add_parser("check", help="run the property suites")
    check.add_argument("--suite", action="append", choices=[*SUITES, *SUITE_ALIASES])
    check.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    check.set_defaults(handler=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
    except ValidationError as exc:
        configure_logging("INFO")
        log.error("invalid JURY_* environment: %s", config_error(exc))
        return EXIT_USAGE
    configure_logging(args.log_level or settings.log_level)

    try:
        return args.handler(args, settings)
    except RegressionFailure as exc:
        log.error("regression: %s", exc)
        return EXIT_REGRESSION
    except (ConfigError, JuryInputError, ManifestError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_USAGE
    except JuryError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_FAILURE
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
