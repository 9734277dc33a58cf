# src/designtrace/experiments/runners.py
"""
Experiment runners

Every runner is a pure function of (cohort, parameters, seed): splits draw from
`numpy.random.default_rng(seed)` only, and sweep cells are assembled in a fixed order
whatever the worker count.

Cell seeds:
    stability     seed_base + iteration
    prefix sweep  seed_base + iteration + 1000 × fraction_index
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..errors import DegenerateLabelsError, DomainError, EmptyCohortError
from ..features.encode import FeatureMatrix
from ..learners.dataset import (
    Dataset,
    SplitSpec,
    TargetKind,
    binarize_all,
    energy_dataset,
    filter_labeled,
    split_indices,
)
from ..learners.logistic import LogisticHyper, predict_proba
from ..learners.metrics import accuracy, majority_fraction, regression_metrics
from ..learners.pipeline import fit_model, predict, split_matrices
from ..models import Cohort, FeatureKind, ModelFamily
from ..utils import ordered_map, require_finite, require_fraction
from .report import ExperimentReport

logger = logging.getLogger(__name__)

DEFAULT_BAND = 10_000.0
DEFAULT_BANDS = (1000.0, 2000.0, 5000.0, 10_000.0, 20_000.0, 50_000.0)
DEFAULT_FRACTIONS = tuple(round(k / 10, 1) for k in range(1, 11))
DEFAULT_BIN_WIDTH = 5000.0
DEFAULT_ITERATIONS = 10
HISTOGRAM_FRAME_BINS = 10
FRACTION_SEED_STRIDE = 1000


@dataclass(frozen=True)
class ExperimentSettings:
    """Knobs shared by the model-fitting experiments"""

    band: float = DEFAULT_BAND
    test_fraction: float = 0.2
    standardize: bool = True
    stratify: bool = False
    hyper: LogisticHyper = field(default_factory=LogisticHyper)
    workers: int = 1

    def __post_init__(self):
        if require_finite(self.band, "band") <= 0:
            raise DomainError(f"band must be > 0, got {self.band}")
        require_fraction(self.test_fraction, "test_fraction", allow_one=False)
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")

    def to_config(self) -> Dict[str, Any]:
        """Parameters that determine results (worker count does not)"""
        config = asdict(self)
        config.pop("workers")
        return config


@dataclass(frozen=True)
class CellResult:
    test_accuracy: Optional[float]
    train_accuracy: Optional[float]
    positive_fraction: float

    @property
    def degenerate(self) -> bool:
        return self.test_accuracy is None


def _labeled(cohort: Cohort, minimum: int = 1) -> Cohort:
    labeled = filter_labeled(cohort)
    if len(labeled) < minimum:
        raise EmptyCohortError(
            f"Need >= {minimum} labeled session(s), cohort has {len(labeled)}"
        )
    return labeled


def majority_baseline(cohort: Cohort, band: float = DEFAULT_BAND) -> float:
    """Accuracy of always predicting the more common class"""
    labeled = _labeled(cohort)
    return majority_fraction(binarize_all(labeled.energies(), band))


def _logistic_cell(
    labeled: Cohort,
    kind: FeatureKind,
    seed: int,
    settings: ExperimentSettings,
    fraction: float = 1.0,
    band: Optional[float] = None,
) -> CellResult:
    """Split, encode, fit and score one logistic model"""
    sessions = labeled.sessions
    labels = binarize_all(labeled.energies(), settings.band if band is None else band)
    spec = SplitSpec(test_fraction=settings.test_fraction, seed=seed, stratify=settings.stratify)
    train_idx, test_idx = split_indices(len(sessions), spec, labels if settings.stratify else None)
    train_x, test_x = split_matrices(sessions, kind, train_idx, test_idx, fraction)

    positive_fraction = float(np.mean(labels))
    try:
        weights = fit_model(
            _label_rows(train_x, labels[train_idx]),
            ModelFamily.LOGISTIC,
            settings.hyper,
            settings.standardize,
        )
    except DegenerateLabelsError as e:
        logger.warning(f"Degenerate cell (seed={seed}, fraction={fraction}): {e}")
        return CellResult(None, None, positive_fraction)

    return CellResult(
        test_accuracy=accuracy(predict(weights, test_x), labels[test_idx]),
        train_accuracy=accuracy(predict(weights, train_x), labels[train_idx]),
        positive_fraction=positive_fraction,
    )


def _label_rows(features: FeatureMatrix, labels: np.ndarray) -> Dataset:
    return Dataset(features, labels, TargetKind.SUCCESS_LABEL)


# ------------------------------------------------
# RUNNERS
# ------------------------------------------------


def histogram_final_energy(cohort: Cohort, bin_width: float = DEFAULT_BIN_WIDTH) -> ExperimentReport:
    """
    Histogram of final net energies with bins centered on 0.

    Bin k covers [(k - 0.5)·w, (k + 0.5)·w). Energies more than HISTOGRAM_FRAME_BINS bins
    from zero are listed under the `outliers` annotation instead.
    """
    if require_finite(bin_width, "bin_width") <= 0:
        raise DomainError(f"bin_width must be > 0, got {bin_width}")
    labeled = _labeled(cohort)

    in_frame: Dict[int, int] = {}
    outliers = []
    for session in labeled.sessions:
        energy = session.final_net_energy
        k = math.floor(energy / bin_width + 0.5)
        if abs(k) > HISTOGRAM_FRAME_BINS:
            outliers.append({"student_id": session.student_id, "net_energy_kwh": energy})
        else:
            in_frame[k] = in_frame.get(k, 0) + 1

    lo, hi = (min(in_frame), max(in_frame)) if in_frame else (0, 0)
    rows = [
        {"bin_low": (k - 0.5) * bin_width, "bin_high": (k + 0.5) * bin_width, "count": in_frame.get(k, 0)}
        for k in range(lo, hi + 1)
    ]
    outliers.sort(key=lambda o: (o["net_energy_kwh"], o["student_id"]))

    return ExperimentReport(
        name="histogram",
        columns=("bin_low", "bin_high", "count"),
        rows=tuple(rows),
        config={"bin_width": float(bin_width), "frame_bins": HISTOGRAM_FRAME_BINS},
        annotations={"outliers": outliers, "n_students": len(labeled)},
    )


def linear_pred_vs_actual(
    cohort: Cohort, seed: int = 0, settings: ExperimentSettings = ExperimentSettings()
) -> ExperimentReport:
    """Tally features → split → linear fit; actual vs predicted energy for test rows"""
    labeled = _labeled(cohort)
    energies = labeled.energies()
    spec = SplitSpec(test_fraction=settings.test_fraction, seed=seed)
    train_idx, test_idx = split_indices(len(labeled), spec)
    train_x, test_x = split_matrices(labeled.sessions, FeatureKind.TALLY, train_idx, test_idx)

    weights = fit_model(
        energy_dataset(train_x, energies[train_idx]), ModelFamily.LINEAR, standardize=settings.standardize
    )
    predicted = predict(weights, test_x)
    actual = energies[test_idx]

    rows = [
        {"student_id": sid, "actual_kwh": float(a), "predicted_kwh": float(p)}
        for sid, a, p in zip(test_x.row_ids, actual, predicted)
    ]
    return ExperimentReport(
        name="linear_pva",
        columns=("student_id", "actual_kwh", "predicted_kwh"),
        rows=tuple(rows),
        config={"seed": seed, **settings.to_config()},
        seed_base=seed,
        annotations={
            "metrics": regression_metrics(actual, predicted).to_dict(),
            "n_train": len(train_idx),
            "n_test": len(test_idx),
        },
    )


def band_sweep(
    cohort: Cohort,
    bands: Sequence[float] = DEFAULT_BANDS,
    seed: int = 0,
    settings: ExperimentSettings = ExperimentSettings(),
) -> ExperimentReport:
    """Test accuracy per success band; single-class cells are flagged degenerate"""
    if not bands:
        raise DomainError("band_sweep needs at least one band")
    for band in bands:
        if require_finite(band, "band") <= 0:
            raise DomainError(f"bands must be > 0, got {band}")
    labeled = _labeled(cohort)

    def run(band: float) -> Dict[str, Any]:
        cell = _logistic_cell(labeled, FeatureKind.TALLY, seed, settings, band=band)
        return {
            "band": float(band),
            "test_accuracy": cell.test_accuracy,
            "positive_fraction": cell.positive_fraction,
            "majority_baseline": majority_baseline(labeled, band),
            "degenerate": cell.degenerate,
        }

    rows = ordered_map(run, list(bands), settings.workers)
    return ExperimentReport(
        name="band_sweep",
        columns=("band", "test_accuracy", "positive_fraction", "majority_baseline", "degenerate"),
        rows=tuple(rows),
        config={"bands": [float(b) for b in bands], "seed": seed, **settings.to_config()},
        seed_base=seed,
        annotations={"n_students": len(labeled)},
    )


def stability_run(
    cohort: Cohort,
    iterations: int = DEFAULT_ITERATIONS,
    seed_base: int = 0,
    settings: ExperimentSettings = ExperimentSettings(),
    kind: FeatureKind = FeatureKind.TALLY,
) -> ExperimentReport:
    """Repeated resampled splits; iteration i splits with seed_base + i"""
    if isinstance(iterations, bool) or not isinstance(iterations, int) or iterations < 1:
        raise DomainError(f"iterations must be a positive integer, got {iterations!r}")
    labeled = _labeled(cohort)

    def run(i: int) -> Dict[str, Any]:
        cell = _logistic_cell(labeled, kind, seed_base + i, settings)
        return {
            "iteration": i,
            "seed": seed_base + i,
            "test_accuracy": cell.test_accuracy,
            "train_accuracy": cell.train_accuracy,
            "degenerate": cell.degenerate,
        }

    rows = ordered_map(run, list(range(iterations)), settings.workers)
    baseline = majority_baseline(labeled, settings.band)
    _log_summary("stability", rows, baseline)

    return ExperimentReport(
        name="stability",
        columns=("iteration", "seed", "test_accuracy", "train_accuracy", "degenerate"),
        rows=tuple(rows),
        config={"iterations": iterations, "feature_kind": kind.value, **settings.to_config()},
        seed_base=seed_base,
        annotations={"majority_baseline": baseline, "n_students": len(labeled)},
    )


def prefix_sweep(
    cohort: Cohort,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    iterations: int = DEFAULT_ITERATIONS,
    seed_base: int = 0,
    settings: ExperimentSettings = ExperimentSettings(),
) -> ExperimentReport:
    """
    Early-prediction grid over sequence prefixes.

    Each (fraction, iteration) cell refits padding and standardization on its own
    training split.
    """
    if not fractions:
        raise DomainError("prefix_sweep needs at least one fraction")
    fractions = [require_fraction(f, "fraction") for f in fractions]
    if isinstance(iterations, bool) or not isinstance(iterations, int) or iterations < 1:
        raise DomainError(f"iterations must be a positive integer, got {iterations!r}")
    labeled = _labeled(cohort)

    cells = [(fi, f, i) for fi, f in enumerate(fractions) for i in range(iterations)]

    def run(cell) -> Dict[str, Any]:
        fi, fraction, i = cell
        seed = seed_base + i + FRACTION_SEED_STRIDE * fi
        result = _logistic_cell(labeled, FeatureKind.SEQUENCE, seed, settings, fraction=fraction)
        return {
            "fraction": fraction,
            "iteration": i,
            "seed": seed,
            "test_accuracy": result.test_accuracy,
            "degenerate": result.degenerate,
        }

    rows = ordered_map(run, cells, settings.workers)
    baseline = majority_baseline(labeled, settings.band)

    means = {}
    for fraction in fractions:
        accs = [r["test_accuracy"] for r in rows if r["fraction"] == fraction and not r["degenerate"]]
        means[f"{fraction:g}"] = float(np.mean(accs)) if accs else None
    logger.info(
        "prefix sweep mean accuracy: "
        + ", ".join(f"{k}={v:.3f}" for k, v in means.items() if v is not None)
        + f" (baseline {baseline:.3f})"
    )

    return ExperimentReport(
        name="prefix_sweep",
        columns=("fraction", "iteration", "seed", "test_accuracy", "degenerate"),
        rows=tuple(rows),
        config={"fractions": fractions, "iterations": iterations, **settings.to_config()},
        seed_base=seed_base,
        annotations={"majority_baseline": baseline, "mean_accuracy": means, "n_students": len(labeled)},
    )


def baseline_report(cohort: Cohort, bands: Sequence[float] = (DEFAULT_BAND,)) -> ExperimentReport:
    """Class balance and majority baseline per band"""
    labeled = _labeled(cohort)
    rows = []
    for band in bands:
        labels = binarize_all(labeled.energies(), band)
        rows.append(
            {
                "band": float(band),
                "n_students": len(labels),
                "n_positive": int(labels.sum()),
                "n_negative": int(len(labels) - labels.sum()),
                "majority_baseline": majority_fraction(labels),
            }
        )
    return ExperimentReport(
        name="baseline",
        columns=("band", "n_students", "n_positive", "n_negative", "majority_baseline"),
        rows=tuple(rows),
        config={"bands": [float(b) for b in bands]},
    )


def prediction_outcomes(
    cohort: Cohort,
    seed: int = 0,
    settings: ExperimentSettings = ExperimentSettings(),
    kind: FeatureKind = FeatureKind.SEQUENCE,
) -> ExperimentReport:
    """Per-test-student actual vs predicted success for one logistic fit"""
    labeled = _labeled(cohort)
    labels = binarize_all(labeled.energies(), settings.band)
    spec = SplitSpec(test_fraction=settings.test_fraction, seed=seed, stratify=settings.stratify)
    train_idx, test_idx = split_indices(len(labeled), spec, labels if settings.stratify else None)
    train_x, test_x = split_matrices(labeled.sessions, kind, train_idx, test_idx)

    weights = fit_model(
        _label_rows(train_x, labels[train_idx]), ModelFamily.LOGISTIC, settings.hyper, settings.standardize
    )
    proba = predict_proba(weights, test_x)
    predicted = predict(weights, test_x)

    rows = [
        {
            "student_id": sid,
            "actual_label": int(a),
            "predicted_label": int(p),
            "probability": float(q),
            "correct": bool(a == p),
        }
        for sid, a, p, q in zip(test_x.row_ids, labels[test_idx], predicted, proba)
    ]
    return ExperimentReport(
        name="outcomes",
        columns=("student_id", "actual_label", "predicted_label", "probability", "correct"),
        rows=tuple(rows),
        config={"seed": seed, "feature_kind": kind.value, **settings.to_config()},
        seed_base=seed,
        annotations={
            "test_accuracy": accuracy(predicted, labels[test_idx]),
            "majority_baseline": majority_fraction(labels),
        },
    )


def _log_summary(name: str, rows: List[Dict[str, Any]], baseline: float) -> None:
    accs = [r["test_accuracy"] for r in rows if r["test_accuracy"] is not None]
    degenerate = len(rows) - len(accs)
    if accs:
        logger.info(
            f"{name}: accuracy min={min(accs):.3f} mean={np.mean(accs):.3f} max={max(accs):.3f} "
            f"(baseline {baseline:.3f}, {degenerate} degenerate)"
        )
    else:
        logger.warning(f"{name}: every cell was degenerate")
