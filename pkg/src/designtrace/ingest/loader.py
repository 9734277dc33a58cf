# src/designtrace/ingest/loader.py
"""
Directory-level ingestion: scan → diagnose → repair → parse
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Tuple

import pandas as pd

from ..errors import DataError, DataIOError, DomainError, EmptyCohortError, UnrepairableCorpusError
from ..features.mapping import DEFAULT_MAPPING, CategoryMapping
from ..models import Cohort, SessionLog
from ..utils import PathLike, ordered_map, read_bytes, write_bytes
from .repair import RepairLog, RepairOutcome, repair
from .session import parse_session

logger = logging.getLogger(__name__)

REPAIR_REPORT_COLUMNS = ["file", "outcome", "n_diagnostics", "first_diagnostic_kind", "first_offset"]


class ScannedFile(NamedTuple):
    path: Path
    size: int

    @property
    def is_empty(self) -> bool:
        return self.size == 0


@dataclass(frozen=True)
class ProcessedFile:
    log: RepairLog
    data: bytes
    session: Optional[SessionLog]


def scan_directory(path: PathLike) -> List[ScannedFile]:
    """Regular `.json` files directly under path, in lexicographic path order"""
    root = Path(path)
    try:
        candidates = sorted(
            (p for p in root.iterdir() if p.suffix == ".json" and p.is_file()),
            key=lambda p: p.as_posix(),
        )
        scanned = [ScannedFile(p, p.stat().st_size) for p in candidates]
    except OSError as e:
        raise DataIOError(f"Cannot scan directory {path}: {e}", path=str(path)) from e

    empty = sum(1 for f in scanned if f.is_empty)
    logger.info(f"Scanned {root}: {len(scanned)} file(s), {empty} empty")
    return scanned


def process_file(scanned: ScannedFile, mapping: CategoryMapping = DEFAULT_MAPPING) -> ProcessedFile:
    """Repair and parse a single scanned file"""
    name = str(scanned.path)
    raw = b"" if scanned.is_empty else read_bytes(scanned.path)
    fixed, log = repair(raw, file=name)

    if not log.usable:
        return ProcessedFile(log=log, data=fixed, session=None)

    try:
        session = parse_session(fixed, scanned.path.stem, mapping)
    except DataError as e:
        logger.warning(f"Excluding {name}: {e}")
        return ProcessedFile(
            log=replace(log, outcome=RepairOutcome.UNREPAIRABLE, note=str(e)),
            data=fixed,
            session=None,
        )
    return ProcessedFile(log=log, data=fixed, session=session)


def _process_directory(
    path: PathLike, mapping: CategoryMapping, workers: int
) -> List[ProcessedFile]:
    scanned = scan_directory(path)
    return ordered_map(lambda f: process_file(f, mapping), scanned, workers)


def _summarize(processed: List[ProcessedFile], path: PathLike) -> Tuple[Cohort, List[RepairLog]]:
    sessions = [p.session for p in processed if p.session is not None]
    logs = [p.log for p in processed]
    counts = {outcome: 0 for outcome in RepairOutcome}
    for log in logs:
        counts[log.outcome] += 1
    logger.info(
        f"Loaded {len(sessions)} session(s) from {path}: "
        + ", ".join(f"{o.value}={n}" for o, n in counts.items())
    )
    return Cohort(sessions=sessions, provenance=str(path)), logs


def load_cohort(
    path: PathLike, mapping: CategoryMapping = DEFAULT_MAPPING, workers: int = 1
) -> Tuple[Cohort, List[RepairLog]]:
    """
    Load every session under path.

    Zero-size and unrepairable files are left out of the cohort but keep their RepairLog.
    """
    return _summarize(_process_directory(path, mapping, workers), path)


def clean_directory(
    in_dir: PathLike,
    out_dir: PathLike,
    mapping: CategoryMapping = DEFAULT_MAPPING,
    workers: int = 1,
) -> Tuple[Cohort, List[RepairLog]]:
    """load_cohort, additionally writing every usable file (repaired bytes) to out_dir"""
    if Path(in_dir).resolve() == Path(out_dir).resolve():
        raise DomainError("Output directory must differ from the input directory")

    processed = _process_directory(in_dir, mapping, workers)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataIOError(f"Cannot create {out_dir}: {e}", path=str(out_dir)) from e

    for item in processed:
        if item.session is not None:
            write_bytes(out / Path(item.log.file).name, item.data)
    return _summarize(processed, in_dir)


def require_sessions(cohort: Cohort, logs: Sequence[RepairLog]) -> Cohort:
    """Raise when nothing usable was loaded"""
    if len(cohort):
        return cohort
    if any(log.outcome is RepairOutcome.UNREPAIRABLE for log in logs):
        raise UnrepairableCorpusError(
            f"No usable session in {cohort.provenance or 'corpus'}: every non-empty file is unrepairable"
        )
    raise EmptyCohortError(f"No sessions found in {cohort.provenance or 'corpus'}")


def repair_report_frame(logs: Sequence[RepairLog]) -> pd.DataFrame:
    rows = []
    for log in logs:
        first = log.found[0] if log.found else None
        rows.append(
            {
                "file": log.file,
                "outcome": log.outcome.value,
                "n_diagnostics": len(log.found),
                "first_diagnostic_kind": first.kind.value if first else "",
                "first_offset": first.byte_offset if first else None,
            }
        )
    frame = pd.DataFrame(rows, columns=REPAIR_REPORT_COLUMNS)
    frame["first_offset"] = frame["first_offset"].astype("Int64")
    return frame


def write_repair_report(logs: Sequence[RepairLog], path: PathLike) -> Path:
    buffer = io.StringIO()
    repair_report_frame(logs).to_csv(buffer, index=False, lineterminator="\n")
    return write_bytes(path, buffer.getvalue().encode("utf-8"))
