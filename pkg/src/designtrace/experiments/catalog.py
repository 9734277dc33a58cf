# src/designtrace/experiments/catalog.py
"""Command-line adapters for the experiment runners"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

from ..models import Cohort, FeatureKind
from .registry import experiment
from .report import ExperimentReport
from .runners import (
    DEFAULT_BANDS,
    DEFAULT_BIN_WIDTH,
    DEFAULT_FRACTIONS,
    DEFAULT_ITERATIONS,
    ExperimentSettings,
    band_sweep,
    baseline_report,
    histogram_final_energy,
    linear_pred_vs_actual,
    prediction_outcomes,
    prefix_sweep,
    stability_run,
)


@dataclass(frozen=True)
class RunOptions:
    seed: int = 0
    iterations: int = DEFAULT_ITERATIONS
    bin_width: float = DEFAULT_BIN_WIDTH
    bands: Tuple[float, ...] = DEFAULT_BANDS
    fractions: Tuple[float, ...] = DEFAULT_FRACTIONS
    feature_kind: FeatureKind = FeatureKind.TALLY
    settings: ExperimentSettings = field(default_factory=ExperimentSettings)


@experiment("hist", "histogram", "Histogram of final net energy")
def run_histogram(cohort: Cohort, options: RunOptions) -> ExperimentReport:
    return histogram_final_energy(cohort, options.bin_width)


@experiment("linear", "linear_pva", "Linear model: predicted vs actual energy on the test split")
def run_linear(cohort: Cohort, options: RunOptions) -> ExperimentReport:
    return linear_pred_vs_actual(cohort, options.seed, options.settings)


@experiment("band", "band_sweep", "Logistic test accuracy across success bands")
def run_band(cohort: Cohort, options: RunOptions) -> ExperimentReport:
    return band_sweep(cohort, options.bands, options.seed, options.settings)


@experiment("stability", "stability", "Logistic test accuracy over resampled splits")
def run_stability(cohort: Cohort, options: RunOptions) -> ExperimentReport:
    return stability_run(
        cohort, options.iterations, options.seed, options.settings, options.feature_kind
    )


@experiment("prefix", "prefix_sweep", "Early prediction from action-sequence prefixes")
def run_prefix(cohort: Cohort, options: RunOptions) -> ExperimentReport:
    return prefix_sweep(cohort, options.fractions, options.iterations, options.seed, options.settings)


@experiment("baseline", "baseline", "Class balance and majority baseline")
def run_baseline(cohort: Cohort, options: RunOptions) -> ExperimentReport:
    return baseline_report(cohort, (options.settings.band,))


@experiment("outcomes", "outcomes", "Per-student logistic predictions on the test split")
def run_outcomes(cohort: Cohort, options: RunOptions) -> ExperimentReport:
    return prediction_outcomes(cohort, options.seed, options.settings, FeatureKind.SEQUENCE)
