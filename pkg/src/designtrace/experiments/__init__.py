"""Experiment runners and report rendering"""

from . import catalog  # noqa: F401  (registers the CLI adapters)
from .catalog import RunOptions
from .registry import ExperimentEntry, ExperimentRegistry, experiment
from .report import (
    FORMATS,
    REPORT_NAMES,
    ExperimentReport,
    parse_report_csv,
    read_report_csv,
    render_report,
    write_report,
)
from .runners import (
    DEFAULT_BANDS,
    DEFAULT_FRACTIONS,
    ExperimentSettings,
    band_sweep,
    baseline_report,
    histogram_final_energy,
    linear_pred_vs_actual,
    majority_baseline,
    prediction_outcomes,
    prefix_sweep,
    stability_run,
)

__all__ = [
    "ExperimentReport",
    "ExperimentSettings",
    "RunOptions",
    "ExperimentRegistry",
    "ExperimentEntry",
    "experiment",
    "REPORT_NAMES",
    "FORMATS",
    "DEFAULT_BANDS",
    "DEFAULT_FRACTIONS",
    "histogram_final_energy",
    "linear_pred_vs_actual",
    "band_sweep",
    "stability_run",
    "prefix_sweep",
    "majority_baseline",
    "baseline_report",
    "prediction_outcomes",
    "render_report",
    "write_report",
    "parse_report_csv",
    "read_report_csv",
]
