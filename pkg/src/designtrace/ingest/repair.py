# src/designtrace/ingest/repair.py
"""
Iterative byte-level repair of malformed session files
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from .diagnostics import (
    Diagnostic,
    DiagnosticKind,
    EditKind,
    ScanResult,
    Scanner,
    diagnose,
    invalid_utf8_spans,
    is_well_formed,
)

logger = logging.getLogger(__name__)

MAX_PASSES = 100


class RepairOutcome(Enum):
    REPAIRED = "Repaired"
    UNREPAIRABLE = "Unrepairable"
    CLEAN_AS_IS = "CleanAsIs"
    SKIPPED_EMPTY = "SkippedEmpty"


@dataclass(frozen=True)
class RepairLog:
    """What was found in one file and what was done about it"""

    file: str
    applied: Tuple[Tuple[Diagnostic, str], ...]
    outcome: RepairOutcome
    found: Tuple[Diagnostic, ...] = ()
    residual: Tuple[Diagnostic, ...] = ()
    note: str = ""

    @property
    def usable(self) -> bool:
        return self.outcome in (RepairOutcome.REPAIRED, RepairOutcome.CLEAN_AS_IS)


_DESCRIPTIONS = {
    DiagnosticKind.MISSING_COMMA: "inserted ','",
    DiagnosticKind.MISSING_QUOTE: "closed string at end of line",
    DiagnosticKind.MISSING_BRACE: "appended '}'",
    DiagnosticKind.MISSING_BRACKET: "appended ']'",
}


def _delete_spans(data: bytes, spans: List[Tuple[int, int]]) -> bytes:
    out = bytearray()
    pos = 0
    for start, end in spans:
        out += data[pos:start]
        pos = end
    out += data[pos:]
    return bytes(out)


def _apply(data: bytes, scan: ScanResult) -> bytes:
    """Apply scanner edits back to front, then cut and close"""
    cut = scan.cut
    kept = [
        e
        for e in scan.edits
        if cut is None
        or e.start < cut
        # a quote closes the token that ends exactly at the cut
        or (e.kind is EditKind.QUOTE and e.start == cut)
    ]
    # at equal offsets the comma goes in first so the quote lands before it
    kept.sort(key=lambda e: (e.start, e.kind.value), reverse=True)

    out = bytearray(data if cut is None else data[:cut])
    for edit in kept:
        out[edit.start : edit.end] = edit.text
    out += scan.suffix
    return bytes(out)


def _describe(diag: Diagnostic, scan: ScanResult, size: int) -> str:
    if diag.kind is DiagnosticKind.TRUNCATED_DOCUMENT:
        return f"dropped {size - scan.cut} trailing byte(s) of an incomplete value"
    return _DESCRIPTIONS[diag.kind]


def repair(data: bytes, file: str = "<bytes>") -> Tuple[bytes, RepairLog]:
    """
    Repair raw session bytes.

    Passes: delete invalid UTF-8, then apply the scanner's structural edits (close
    strings, insert commas, roll back a truncated tail, append closers). Passes repeat
    until the bytes parse or nothing changes, at most MAX_PASSES times.

    Returns:
        (bytes, RepairLog). The bytes parse as JSON unless the outcome is Unrepairable, in
        which case the input comes back unchanged and the log lists the residual
        diagnostics of the last attempt.
    """
    if not data:
        return data, RepairLog(file=file, applied=(), outcome=RepairOutcome.SKIPPED_EMPTY)

    found = tuple(diagnose(data))
    if not found:
        return data, RepairLog(file=file, applied=(), outcome=RepairOutcome.CLEAN_AS_IS)

    current = data
    applied: List[Tuple[Diagnostic, str]] = []

    for _ in range(MAX_PASSES):
        if is_well_formed(current):
            break

        spans = invalid_utf8_spans(current)
        if spans:
            for start, end in spans:
                diag = Diagnostic.at(current, start, DiagnosticKind.NON_UTF8_BYTE)
                applied.append((diag, f"deleted {end - start} invalid UTF-8 byte(s)"))
            current = _delete_spans(current, spans)
            continue

        scan = Scanner(current).run()
        if not scan.tail_repairable:
            break
        repaired = _apply(current, scan)
        if repaired == current:
            break
        for diag in scan.diagnostics:
            if diag.kind is not DiagnosticKind.UNKNOWN_TOKEN:
                applied.append((diag, _describe(diag, scan, len(current))))
        current = repaired

    if is_well_formed(current):
        logger.info(f"Repaired {file} ({len(applied)} fix(es))")
        return current, RepairLog(
            file=file, applied=tuple(applied), outcome=RepairOutcome.REPAIRED, found=found
        )

    residual = tuple(diagnose(current))
    logger.warning(
        f"Unrepairable {file}: {len(residual)} residual diagnostic(s), "
        f"first {residual[0].kind.value} at byte {residual[0].byte_offset}"
    )
    return data, RepairLog(
        file=file,
        applied=tuple(applied),
        outcome=RepairOutcome.UNREPAIRABLE,
        found=found,
        residual=residual,
    )
