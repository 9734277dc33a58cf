# src/designtrace/experiments/report.py
"""
ExperimentReport and its CSV / SVG renderings

CSV layout: header row, one line per record, then trailer comment lines

    # report <name>
    # seed_base <int>
    # config <json>
    # <annotation key> <json>          (sorted by key)

Floats are printed with 6 significant digits; missing values are empty cells. The trailer
re-parses to the exact config (JSON floats round-trip).
"""

from __future__ import annotations

import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")

import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from matplotlib.backends.backend_svg import FigureCanvasSVG  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from ..errors import DataError, DomainError  # noqa: E402
from ..json_safe import json_safe  # noqa: E402
from ..utils import PathLike, read_bytes, write_bytes  # noqa: E402

logger = logging.getLogger(__name__)

REPORT_NAMES = (
    "histogram",
    "linear_pva",
    "band_sweep",
    "stability",
    "prefix_sweep",
    "baseline",
    "outcomes",
)
FORMATS = ("csv", "svg")
FLOAT_FORMAT = "%.6g"
TRAILER_PREFIX = "# "

# Fixed id salt and no timestamp so SVG output is byte-stable
SVG_RC = {"svg.hashsalt": "designtrace", "svg.fonttype": "none"}
SVG_METADATA = {"Date": None}
MARKER_GID = "markers"


@dataclass(frozen=True)
class ExperimentReport:
    name: str
    columns: Tuple[str, ...]
    rows: Tuple[Dict[str, Any], ...]
    config: Dict[str, Any]
    seed_base: int = 0
    annotations: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in REPORT_NAMES:
            raise DomainError(f"Unknown report name: {self.name}")
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(dict(r) for r in self.rows))
        for i, row in enumerate(self.rows):
            if set(row) != set(self.columns):
                raise DomainError(f"Row {i} fields {sorted(row)} != columns {list(self.columns)}")

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> List[Any]:
        return [row[name] for row in self.rows]

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.rows), columns=list(self.columns))


def _dumps(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), default=json_safe)


# ------------------------------------------------
# CSV
# ------------------------------------------------


def render_csv(report: ExperimentReport) -> bytes:
    buffer = io.StringIO()
    report.frame().to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    buffer.write(f"{TRAILER_PREFIX}report {report.name}\n")
    buffer.write(f"{TRAILER_PREFIX}seed_base {int(report.seed_base)}\n")
    buffer.write(f"{TRAILER_PREFIX}config {_dumps(report.config)}\n")
    for key in sorted(report.annotations):
        buffer.write(f"{TRAILER_PREFIX}{key} {_dumps(report.annotations[key])}\n")
    return buffer.getvalue().encode("utf-8")


def _cell(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, np.generic):
        return value.item()
    return value


def parse_report_csv(data: bytes) -> ExperimentReport:
    """Inverse of render_csv (values as printed, i.e. 6 significant digits)"""
    text = data.decode("utf-8")
    body: List[str] = []
    trailer: Dict[str, Any] = {}
    for line in text.splitlines():
        if line.startswith(TRAILER_PREFIX):
            key, _, payload = line[len(TRAILER_PREFIX) :].partition(" ")
            trailer[key] = payload if key == "report" else json.loads(payload)
        else:
            body.append(line)

    for required in ("report", "seed_base", "config"):
        if required not in trailer:
            raise DataError(f"Report CSV has no '{required}' trailer line")

    frame = pd.read_csv(io.StringIO("\n".join(body) + "\n"), keep_default_na=True)
    rows = [{k: _cell(v) for k, v in record.items()} for record in frame.to_dict(orient="records")]
    name = trailer.pop("report")
    seed_base = trailer.pop("seed_base")
    config = trailer.pop("config")
    return ExperimentReport(
        name=name,
        columns=tuple(frame.columns),
        rows=tuple(rows),
        config=config,
        seed_base=seed_base,
        annotations=trailer,
    )


def read_report_csv(path: PathLike) -> ExperimentReport:
    return parse_report_csv(read_bytes(path))


# ------------------------------------------------
# SVG
# ------------------------------------------------


def _numbers(report: ExperimentReport, name: str) -> np.ndarray:
    return np.array([np.nan if v is None else float(v) for v in report.column(name)], dtype=float)


def _baseline_line(ax, report: ExperimentReport) -> None:
    baseline = report.annotations.get("majority_baseline")
    if baseline is not None:
        ax.axhline(baseline, color="gray", linestyle="--", linewidth=1, label="majority baseline")


def _plot_histogram(ax, report: ExperimentReport) -> None:
    lows, highs = _numbers(report, "bin_low"), _numbers(report, "bin_high")
    ax.bar((lows + highs) / 2, _numbers(report, "count"), width=highs - lows, edgecolor="black", gid="bars")
    ax.set_xlabel("final net energy (kWh)")
    ax.set_ylabel("students")


def _plot_linear_pva(ax, report: ExperimentReport) -> None:
    x = np.arange(len(report))
    ax.plot(x, _numbers(report, "actual_kwh"), "o", label="actual", gid=MARKER_GID)
    ax.plot(x, _numbers(report, "predicted_kwh"), "s", label="predicted", gid=f"{MARKER_GID}-predicted")
    ax.set_xticks(x, labels=report.column("student_id"), rotation=90)
    ax.set_ylabel("final net energy (kWh)")


def _plot_band_sweep(ax, report: ExperimentReport) -> None:
    bands, acc = _numbers(report, "band"), _numbers(report, "test_accuracy")
    ok = ~np.isnan(acc)
    ax.plot(bands[ok], acc[ok], "o-", label="test accuracy", gid=MARKER_GID)
    ax.plot(bands, _numbers(report, "majority_baseline"), "--", color="gray", label="majority baseline")
    ax.set_xscale("log")
    ax.set_xlabel("band (kWh)")
    ax.set_ylabel("accuracy")


def _plot_stability(ax, report: ExperimentReport) -> None:
    it, acc = _numbers(report, "iteration"), _numbers(report, "test_accuracy")
    ok = ~np.isnan(acc)
    ax.plot(it[ok], acc[ok], "o", label="test accuracy", gid=MARKER_GID)
    _baseline_line(ax, report)
    ax.set_xlabel("iteration")
    ax.set_ylabel("accuracy")


def _plot_prefix_sweep(ax, report: ExperimentReport) -> None:
    frac, acc = _numbers(report, "fraction"), _numbers(report, "test_accuracy")
    ok = ~np.isnan(acc)
    ax.plot(frac[ok], acc[ok], "o", alpha=0.4, label="cell", gid=MARKER_GID)
    means = {float(k): v for k, v in report.annotations.get("mean_accuracy", {}).items() if v is not None}
    if means:
        xs = sorted(means)
        ax.plot(xs, [means[x] for x in xs], "-", color="black", label="mean")
    _baseline_line(ax, report)
    ax.set_xlabel("fraction of action sequence")
    ax.set_ylabel("accuracy")


def _plot_baseline(ax, report: ExperimentReport) -> None:
    ax.bar(
        [f"{b:g}" for b in _numbers(report, "band")],
        _numbers(report, "majority_baseline"),
        edgecolor="black",
        gid="bars",
    )
    ax.set_xlabel("band (kWh)")
    ax.set_ylabel("majority baseline")


def _plot_outcomes(ax, report: ExperimentReport) -> None:
    x = np.arange(len(report))
    prob = _numbers(report, "probability")
    correct = np.array(report.column("correct"), dtype=bool)
    ax.plot(x[correct], prob[correct], "o", color="tab:green", label="correct", gid=MARKER_GID)
    ax.plot(x[~correct], prob[~correct], "x", color="tab:red", label="incorrect", gid=f"{MARKER_GID}-incorrect")
    ax.axhline(0.5, color="gray", linestyle="--", linewidth=1)
    ax.set_xticks(x, labels=report.column("student_id"), rotation=90)
    ax.set_ylabel("predicted probability of success")


_PLOTTERS: Dict[str, Callable] = {
    "histogram": _plot_histogram,
    "linear_pva": _plot_linear_pva,
    "band_sweep": _plot_band_sweep,
    "stability": _plot_stability,
    "prefix_sweep": _plot_prefix_sweep,
    "baseline": _plot_baseline,
    "outcomes": _plot_outcomes,
}


def render_svg(report: ExperimentReport) -> bytes:
    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(7, 4.5))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(1, 1, 1)
        _PLOTTERS[report.name](ax, report)
        ax.set_title(report.name)
        ax.grid(True, alpha=0.3)
        if ax.get_legend_handles_labels()[0]:
            ax.legend(loc="best", fontsize="small")
        fig.tight_layout()

        buffer = io.BytesIO()
        fig.savefig(buffer, format="svg", metadata=SVG_METADATA)
    return buffer.getvalue()


# ------------------------------------------------
# ENTRY POINTS
# ------------------------------------------------


def render_report(report: ExperimentReport, fmt: str) -> bytes:
    """CSV or SVG bytes, deterministic for a given report"""
    if fmt not in FORMATS:
        raise DomainError(f"Unknown report format {fmt!r}; expected one of {FORMATS}")
    if not len(report):
        raise DomainError(f"Report {report.name} has no rows")
    return render_csv(report) if fmt == "csv" else render_svg(report)


def write_report(report: ExperimentReport, path: PathLike, fmt: Optional[str] = None) -> Path:
    fmt = fmt or Path(path).suffix.lstrip(".").lower() or "csv"
    logger.info(f"Writing {report.name} report ({len(report)} rows) to {path}")
    return write_bytes(path, render_report(report, fmt))
