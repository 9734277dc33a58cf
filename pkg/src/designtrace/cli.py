# src/designtrace/cli.py
"""
designtrace command line

    designtrace clean <in-dir> --out <dir> --report repairs.csv
    designtrace encode <clean-dir> --kind tally|sequence [--prefix 0.6] --out features.csv
    designtrace train --features features.csv --band 10000 --seed 7 --out model.json --metrics metrics.csv
    designtrace experiment {hist|linear|band|stability|prefix|baseline|outcomes} --cohort <dir> --out report.csv [--svg report.svg]
    designtrace synth --n 128 --signal 0.9 --corrupt 0.1 --seed 42 --out <dir> --manifest manifest.csv

Exit codes: 0 success, 1 usage error, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from dataclasses import replace
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from . import __version__
from .errors import DataError, DomainError
from .experiments import ExperimentRegistry, RunOptions, write_report
from .experiments.runners import DEFAULT_BAND, ExperimentSettings
from .features import DEFAULT_MAPPING, CategoryMapping, feature_matrix, load_mapping, write_features_csv
from .features.io import read_features_csv
from .ingest import clean_directory, load_cohort, require_sessions, write_repair_report
from .json_safe import json_safe
from .learners import (
    Dataset,
    LogisticHyper,
    SplitSpec,
    TargetKind,
    accuracy,
    binarize_all,
    fit_model,
    majority_fraction,
    predict,
    regression_metrics,
    save_model,
    split,
)
from .models import FeatureKind, ModelFamily
from .monitoring import MetricsCollector, StageTimer
from .settings import Settings
from .synth import GenConfig, generate, verify_manifest, write_manifest
from .utils import setup_logger, write_bytes

logger = logging.getLogger("designtrace.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose errors exit with EXIT_USAGE"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Context:
    def __init__(self, args: argparse.Namespace, mapping: CategoryMapping, workers: int):
        self.args = args
        self.mapping = mapping
        self.workers = workers
        self.metrics = MetricsCollector()

    def stage(self, name: str) -> StageTimer:
        return StageTimer(self.metrics, name)


# ------------------------------------------------
# SUBCOMMANDS
# ------------------------------------------------


def cmd_clean(ctx: Context) -> int:
    args = ctx.args
    with ctx.stage("clean") as timer:
        cohort, logs = clean_directory(args.in_dir, args.out, ctx.mapping, ctx.workers)
        timer.items = len(logs)
    if args.report:
        write_repair_report(logs, args.report)
    require_sessions(cohort, logs)
    return EXIT_OK


def cmd_encode(ctx: Context) -> int:
    args = ctx.args
    kind = FeatureKind(args.kind)
    if args.prefix is not None and kind is not FeatureKind.SEQUENCE:
        raise UsageError("--prefix applies to --kind sequence only")

    with ctx.stage("load") as timer:
        cohort, logs = load_cohort(args.clean_dir, ctx.mapping, ctx.workers)
        timer.items = len(logs)
    require_sessions(cohort, logs)

    with ctx.stage("encode") as timer:
        matrix = feature_matrix(cohort.sessions, kind, fraction=1.0 if args.prefix is None else args.prefix)
        timer.items = matrix.n_rows
    write_features_csv(matrix, [s.final_net_energy for s in cohort.sessions], args.out)
    return EXIT_OK


def _write_metrics(metrics: Dict[str, Any], path: str) -> None:
    frame = pd.DataFrame({"metric": list(metrics), "value": list(metrics.values())})
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    write_bytes(path, buffer.getvalue().encode("utf-8"))


def cmd_train(ctx: Context) -> int:
    args = ctx.args
    kind = FeatureKind(args.kind)
    family = ModelFamily(args.family)

    matrix, energies = read_features_csv(args.features, kind)
    labeled = np.flatnonzero(~np.isnan(energies))
    if len(labeled) < len(energies):
        logger.info(f"Dropping {len(energies) - len(labeled)} row(s) without a final net energy")
    matrix, energies = matrix.take(labeled), energies[labeled]

    if family is ModelFamily.LOGISTIC:
        targets = binarize_all(energies, args.band)
        dataset = Dataset(matrix, targets, TargetKind.SUCCESS_LABEL)
    else:
        dataset = Dataset(matrix, energies, TargetKind.ENERGY)

    spec = SplitSpec(test_fraction=args.test_fraction, seed=args.seed, stratify=args.stratify)
    train, test = split(dataset, spec)

    hyper = LogisticHyper(learning_rate=args.lr, max_iters=args.max_iters, l2_strength=args.l2)
    with ctx.stage("fit") as timer:
        weights = fit_model(train, family, hyper, standardize=not args.no_standardize)
        timer.items = train.n_rows
    save_model(weights, args.out)

    metrics: Dict[str, Any] = {
        "family": family.value,
        "feature_kind": kind.value,
        "seed": args.seed,
        "n_train": train.n_rows,
        "n_test": test.n_rows,
    }
    if family is ModelFamily.LOGISTIC:
        test_acc = accuracy(predict(weights, test.features), test.targets)
        train_acc = accuracy(predict(weights, train.features), train.targets)
        metrics.update(
            band=float(args.band),
            test_accuracy=test_acc,
            train_accuracy=train_acc,
            majority_baseline=majority_fraction(dataset.targets),
            final_loss=weights.final_loss,
            iterations=weights.iterations,
        )
        logger.info(f"Test accuracy {test_acc:.4f} (train {train_acc:.4f})")
    else:
        scores = regression_metrics(test.targets, predict(weights, test.features))
        metrics.update(scores.to_dict())
        logger.info(f"Test RMSE {scores.rmse:.6g} kWh, R² {scores.r2:.4f}")

    if args.metrics:
        _write_metrics(metrics, args.metrics)
    return EXIT_OK


def cmd_experiment(ctx: Context) -> int:
    args = ctx.args
    entry = ExperimentRegistry.resolve(args.name)

    with ctx.stage("load") as timer:
        cohort, logs = load_cohort(args.cohort, ctx.mapping, ctx.workers)
        timer.items = len(logs)
    require_sessions(cohort, logs)

    settings = ExperimentSettings(
        band=args.band,
        test_fraction=args.test_fraction,
        standardize=not args.no_standardize,
        stratify=args.stratify,
        hyper=LogisticHyper(learning_rate=args.lr, max_iters=args.max_iters, l2_strength=args.l2),
        workers=ctx.workers,
    )
    options = RunOptions(
        seed=args.seed,
        iterations=args.iters,
        bin_width=args.bin_width,
        bands=tuple(args.bands) if args.bands else RunOptions.bands,
        fractions=tuple(args.fractions) if args.fractions else RunOptions.fractions,
        feature_kind=FeatureKind(args.kind),
        settings=settings,
    )

    with ctx.stage(f"experiment:{args.name}") as timer:
        report = entry.run(cohort, options)
        timer.items = len(report)
    report = replace(report, config={**report.config, "mapping_version": ctx.mapping.version})

    with ctx.stage("render"):
        write_report(report, args.out, "csv")
        if args.svg:
            write_report(report, args.svg, "svg")
    return EXIT_OK


def cmd_synth(ctx: Context) -> int:
    args = ctx.args
    config = GenConfig(
        n_students=args.n,
        success_rate=args.success_rate,
        signal=args.signal,
        early_signal=args.early_signal,
        length_range=(args.min_len, args.max_len),
        corruption_rate=args.corrupt,
        seed=args.seed,
        energy_law=args.energy_law,
    )
    with ctx.stage("synth") as timer:
        manifest = generate(config, args.out, ctx.workers)
        timer.items = len(manifest)
    if args.manifest:
        write_manifest(manifest, args.manifest)

    if args.verify_band is not None:
        cohort, _ = load_cohort(args.out, ctx.mapping, ctx.workers)
        check = verify_manifest(manifest, cohort, args.verify_band)
        for mismatch in check.mismatches:
            print(f"{mismatch.file}: {mismatch.kind.value}: {mismatch.detail}", file=sys.stderr)
        if not check.ok:
            return EXIT_DATA
    return EXIT_OK


# ------------------------------------------------
# PARSER
# ------------------------------------------------


def _fraction_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("global options")
    group.add_argument("--seed", type=int, default=0, help="Seed for every random draw (default: 0)")
    group.add_argument("--quiet", action="store_true", help="Warnings only; no config echo")
    group.add_argument("--mapping", default=None, help="Category mapping JSON file")
    group.add_argument("--workers", type=_positive_int, default=None, help="Thread pool size")
    group.add_argument("--env-file", default=None, help="dotenv file (default: nearest .env)")
    return common


def _model_flags() -> argparse.ArgumentParser:
    model = argparse.ArgumentParser(add_help=False)
    group = model.add_argument_group("model options")
    group.add_argument("--band", type=float, default=DEFAULT_BAND, help="Success band E in kWh")
    group.add_argument("--test-fraction", type=float, default=0.2)
    group.add_argument("--stratify", action="store_true", help="Stratify the split by label")
    group.add_argument("--no-standardize", action="store_true", help="Fit on raw features")
    group.add_argument("--l2", type=float, default=1.0, help="L2 strength (logistic)")
    group.add_argument("--lr", type=float, default=0.1, help="Learning rate (logistic)")
    group.add_argument("--max-iters", type=_positive_int, default=5000)
    return model


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="designtrace",
        description="Repair CAD action logs, encode features, train models and run experiments",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"designtrace {__version__} (category mapping {DEFAULT_MAPPING.version})",
    )
    common = _common_flags()
    model = _model_flags()
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("clean", parents=[common], help="Repair a directory of session logs")
    p.add_argument("in_dir")
    p.add_argument("--out", required=True, help="Directory for repaired files")
    p.add_argument("--report", default=None, help="repairs.csv path")
    p.set_defaults(handler=cmd_clean)

    p = sub.add_parser("encode", parents=[common], help="Build a features.csv table")
    p.add_argument("clean_dir")
    p.add_argument("--kind", choices=[k.value for k in FeatureKind], default=FeatureKind.TALLY.value)
    p.add_argument("--prefix", type=float, default=None, help="Leading fraction of each sequence")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_encode)

    p = sub.add_parser("train", parents=[common, model], help="Fit a model on features.csv")
    p.add_argument("--features", required=True)
    p.add_argument("--kind", choices=[k.value for k in FeatureKind], default=FeatureKind.TALLY.value)
    p.add_argument(
        "--family", choices=[f.value for f in ModelFamily], default=ModelFamily.LOGISTIC.value
    )
    p.add_argument("--out", required=True, help="model.json path")
    p.add_argument("--metrics", default=None, help="metrics.csv path")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("experiment", parents=[common, model], help="Run an experiment")
    p.add_argument("name", choices=ExperimentRegistry.commands())
    p.add_argument("--cohort", required=True, help="Directory of session logs")
    p.add_argument("--iters", type=_positive_int, default=RunOptions.iterations)
    p.add_argument("--bin-width", type=float, default=RunOptions.bin_width)
    p.add_argument("--bands", type=_fraction_list, default=None, help="Comma-separated bands (kWh)")
    p.add_argument("--fractions", type=_fraction_list, default=None, help="Comma-separated prefix fractions")
    p.add_argument("--kind", choices=[k.value for k in FeatureKind], default=FeatureKind.TALLY.value,
                   help="Feature kind for the stability run")
    p.add_argument("--out", required=True, help="Report CSV path")
    p.add_argument("--svg", default=None, help="Report SVG path")
    p.set_defaults(handler=cmd_experiment)

    p = sub.add_parser("synth", parents=[common], help="Generate a synthetic cohort")
    p.add_argument("--n", type=_positive_int, default=GenConfig.n_students)
    p.add_argument("--success-rate", type=float, default=GenConfig.success_rate)
    p.add_argument("--signal", type=float, default=GenConfig.signal)
    p.add_argument("--early-signal", type=float, default=GenConfig.early_signal)
    p.add_argument("--min-len", type=_positive_int, default=GenConfig.length_range[0])
    p.add_argument("--max-len", type=_positive_int, default=GenConfig.length_range[1])
    p.add_argument("--corrupt", type=float, default=GenConfig.corruption_rate)
    p.add_argument("--energy-law", choices=["band", "linear"], default=GenConfig.energy_law)
    p.add_argument("--out", required=True, help="Output directory")
    p.add_argument("--manifest", default=None, help="manifest.csv path")
    p.add_argument("--verify-band", type=float, default=None, help="Reload and check labels at this band")
    p.set_defaults(handler=cmd_synth)

    return parser


# ------------------------------------------------
# ENTRY POINT
# ------------------------------------------------


def _resolved_config(args: argparse.Namespace, mapping: CategoryMapping, workers: int) -> Dict[str, Any]:
    config = {k: v for k, v in vars(args).items() if k not in ("handler", "quiet", "env_file")}
    config.update(workers=workers, mapping_version=mapping.version, version=__version__)
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (None, 0) else EXIT_USAGE

    try:
        settings = Settings.from_env(args.env_file)
        log = setup_logger("designtrace", logging.WARNING if args.quiet else settings.level)
        mapping_path = args.mapping or settings.mapping_path
        mapping = load_mapping(mapping_path) if mapping_path else DEFAULT_MAPPING
        workers = args.workers or settings.workers

        if not args.quiet:
            config = _resolved_config(args, mapping, workers)
            print(json.dumps(config, sort_keys=True, default=json_safe), file=sys.stderr)

        ctx = Context(args, mapping, workers)
        handler: Callable[[Context], int] = args.handler
        code = handler(ctx)
        for line in ctx.metrics.summary_lines():
            log.info(f"stage {line}")
        return code

    except UsageError as e:
        print(f"designtrace {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"designtrace {args.command}: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as e:
        print(f"designtrace {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"designtrace {args.command}: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
