"""Session-log ingestion and repair"""

from .diagnostics import Diagnostic, DiagnosticKind, diagnose, is_well_formed
from .loader import (
    ScannedFile,
    clean_directory,
    load_cohort,
    process_file,
    repair_report_frame,
    require_sessions,
    scan_directory,
    write_repair_report,
)
from .repair import MAX_PASSES, RepairLog, RepairOutcome, repair
from .session import parse_session

__all__ = [
    "Diagnostic",
    "DiagnosticKind",
    "diagnose",
    "is_well_formed",
    "repair",
    "RepairLog",
    "RepairOutcome",
    "MAX_PASSES",
    "parse_session",
    "ScannedFile",
    "scan_directory",
    "process_file",
    "load_cohort",
    "clean_directory",
    "require_sessions",
    "repair_report_frame",
    "write_repair_report",
]
