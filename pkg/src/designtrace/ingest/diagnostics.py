# src/designtrace/ingest/diagnostics.py
"""
Single-pass structural scanner for session files

The scanner walks raw bytes once, tracking the container stack and what the grammar
expects next. It reports malformations as Diagnostics and, for the fault classes the
repairer handles, also records the minimal edit that fixes them:

  - non-UTF-8 bytes                     (found by the decoder, not the scanner)
  - string left open at end of a line   → insert '"' before the newline
  - adjacent values without a comma     → insert ','
  - containers left open at end of input → append the closers
  - input cut in the middle of a value  → roll back to the last complete value, then close

JSON structural characters are all ASCII and every byte of a multi-byte UTF-8 sequence
is >= 0x80, so scanning bytes instead of text is exact and keeps offsets in bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List, Optional, Tuple


class DiagnosticKind(Enum):
    NON_UTF8_BYTE = "NonUtf8Byte"
    MISSING_COMMA = "MissingComma"
    MISSING_BRACE = "MissingBrace"
    MISSING_BRACKET = "MissingBracket"
    MISSING_QUOTE = "MissingQuote"
    TRUNCATED_DOCUMENT = "TruncatedDocument"
    UNKNOWN_TOKEN = "UnknownToken"


EXCERPT_RADIUS = 20


@dataclass(frozen=True)
class Diagnostic:
    byte_offset: int
    kind: DiagnosticKind
    excerpt: bytes = b""

    @classmethod
    def at(cls, data: bytes, offset: int, kind: DiagnosticKind) -> "Diagnostic":
        lo = max(0, offset - EXCERPT_RADIUS)
        return cls(byte_offset=offset, kind=kind, excerpt=data[lo : offset + EXCERPT_RADIUS])


class EditKind(Enum):
    QUOTE = 0
    COMMA = 1


@dataclass(frozen=True)
class Edit:
    """Replace data[start:end] with text"""

    start: int
    end: int
    text: bytes
    kind: EditKind


class _Expect(Enum):
    VALUE = "value"
    KEY = "key"
    COLON = "colon"
    AFTER_VALUE = "after_value"
    DONE = "done"


_WHITESPACE = frozenset(b" \t\r\n")
_NUMBER = re.compile(rb"-?(?:0|[1-9][0-9]*)(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?")
_NUMBER_RUN = re.compile(rb"[-+0-9.eE]+")
_WORD_RUN = re.compile(rb"[A-Za-z]+")
_LITERALS = (b"true", b"false", b"null")
_CLOSER = {"{": b"}", "[": b"]"}
_MISSING_KIND = {"{": DiagnosticKind.MISSING_BRACE, "[": DiagnosticKind.MISSING_BRACKET}


@dataclass
class ScanResult:
    diagnostics: List[Diagnostic] = field(default_factory=list)
    edits: List[Edit] = field(default_factory=list)
    # Truncation: keep data[:cut] (None = keep everything)
    cut: Optional[int] = None
    suffix: bytes = b""
    # False when the input ends mid-value and nothing before it is complete
    tail_repairable: bool = True


class Scanner:
    """One linear pass over the bytes of a (possibly malformed) JSON document"""

    def __init__(self, data: bytes, skip: FrozenSet[int] = frozenset()):
        self.data = data
        self.skip = skip
        self.stack: List[str] = []
        self.expect = _Expect.VALUE
        self.just_opened = False
        self.prev_end = 0
        self.safe: Optional[Tuple[int, Tuple[str, ...]]] = None
        self.truncated_at: Optional[int] = None
        self.result = ScanResult()

    # ------------------------------------------------
    # DRIVER
    # ------------------------------------------------

    def run(self) -> ScanResult:
        data = self.data
        n = len(data)
        i = 0

        while i < n and self.truncated_at is None:
            if i in self.skip:
                i += 1
                continue

            b = data[i]
            if b in _WHITESPACE:
                i += 1
            elif b == 0x22:  # "
                i = self._string(i)
            elif b in b"{[":
                self._open(i, chr(b))
                i += 1
            elif b in b"}]":
                self._close(i, "{" if b == 0x7D else "[")
                i += 1
            elif b == 0x2C:  # ,
                self._comma(i)
                i += 1
            elif b == 0x3A:  # :
                self._colon(i)
                i += 1
            elif b == 0x2D or 0x30 <= b <= 0x39:
                i = self._number(i)
            elif 0x41 <= b <= 0x5A or 0x61 <= b <= 0x7A:
                i = self._literal(i)
            else:
                self._diag(i, DiagnosticKind.UNKNOWN_TOKEN)
                i += 1

        self._finish()
        return self.result

    # ------------------------------------------------
    # TOKENS
    # ------------------------------------------------

    def _string(self, start: int) -> int:
        data = self.data
        n = len(data)
        j = start + 1

        while j < n:
            c = data[j]
            if c == 0x5C:  # backslash escape
                j += 2
                continue
            if c == 0x22:
                self._scalar(start, j + 1, is_string=True)
                return j + 1
            if c == 0x0A:
                close_at = j - 1 if data[j - 1] == 0x0D and j - 1 > start else j
                self._diag(close_at, DiagnosticKind.MISSING_QUOTE)
                self.result.edits.append(Edit(close_at, close_at, b'"', EditKind.QUOTE))
                self._scalar(start, close_at, is_string=True)
                return j
            if c == 0x0D and j + 1 < n and data[j + 1] == 0x0A:
                j += 1
                continue
            if c < 0x20:
                self._diag(j, DiagnosticKind.UNKNOWN_TOKEN)
            j += 1

        # Ran off the end inside a string
        self.truncated_at = start
        return n

    def _number(self, start: int) -> int:
        run = _NUMBER_RUN.match(self.data, start)
        end = run.end()
        if _NUMBER.fullmatch(self.data, start, end):
            self._scalar(start, end)
        elif end >= len(self.data):
            self.truncated_at = start
        else:
            self._diag(start, DiagnosticKind.UNKNOWN_TOKEN)
        return end

    def _literal(self, start: int) -> int:
        run = _WORD_RUN.match(self.data, start)
        word, end = run.group(), run.end()
        if word in _LITERALS:
            self._scalar(start, end)
        elif end >= len(self.data) and any(lit.startswith(word) for lit in _LITERALS):
            self.truncated_at = start
        else:
            self._diag(start, DiagnosticKind.UNKNOWN_TOKEN)
        return end

    def _scalar(self, start: int, end: int, is_string: bool = False) -> None:
        role = self._begin_value(start, is_string)
        if role == "key":
            self.expect = _Expect.COLON
            self.just_opened = False
            self.prev_end = end
        else:
            self._end_value(end)

    def _open(self, i: int, opener: str) -> None:
        self._begin_value(i, is_string=False)
        self.stack.append(opener)
        self.expect = _Expect.KEY if opener == "{" else _Expect.VALUE
        self.just_opened = True
        self.prev_end = i + 1
        self.safe = (i + 1, tuple(self.stack))

    def _close(self, i: int, opener: str) -> None:
        if not self.stack or self.stack[-1] != opener:
            self._diag(i, DiagnosticKind.UNKNOWN_TOKEN)
            return
        closable = self.expect is _Expect.AFTER_VALUE or (
            self.just_opened and self.expect in (_Expect.KEY, _Expect.VALUE)
        )
        if not closable:
            # trailing comma, or key without value
            self._diag(i, DiagnosticKind.UNKNOWN_TOKEN)
        self.stack.pop()
        self._end_value(i + 1)

    def _comma(self, i: int) -> None:
        if self.expect is _Expect.AFTER_VALUE and self.stack:
            self.expect = _Expect.KEY if self.stack[-1] == "{" else _Expect.VALUE
            self.just_opened = False
            self.prev_end = i + 1
        else:
            self._diag(i, DiagnosticKind.UNKNOWN_TOKEN)

    def _colon(self, i: int) -> None:
        if self.expect is _Expect.COLON:
            self.expect = _Expect.VALUE
            self.prev_end = i + 1
        else:
            self._diag(i, DiagnosticKind.UNKNOWN_TOKEN)

    # ------------------------------------------------
    # GRAMMAR STATE
    # ------------------------------------------------

    def _begin_value(self, start: int, is_string: bool) -> str:
        """Classify the token starting at `start` as 'key' or 'value'"""
        expect = self.expect

        if expect is _Expect.VALUE:
            return "value"
        if expect is _Expect.KEY:
            if is_string:
                return "key"
            self._diag(start, DiagnosticKind.UNKNOWN_TOKEN)
            return "value"
        if expect is _Expect.AFTER_VALUE and self.stack:
            self._missing_comma(start)
            if self.stack[-1] == "{":
                if is_string:
                    return "key"
                self._diag(start, DiagnosticKind.UNKNOWN_TOKEN)
            return "value"

        # missing colon, or data after the top-level value
        self._diag(start, DiagnosticKind.UNKNOWN_TOKEN)
        return "value"

    def _end_value(self, end: int) -> None:
        self.prev_end = end
        self.just_opened = False
        if self.stack:
            self.expect = _Expect.AFTER_VALUE
            self.safe = (end, tuple(self.stack))
        else:
            self.expect = _Expect.DONE

    def _missing_comma(self, start: int) -> None:
        self._diag(start, DiagnosticKind.MISSING_COMMA)
        gap = self.data[self.prev_end : start]
        if b"\n" in gap:
            edit = Edit(self.prev_end, self.prev_end, b",", EditKind.COMMA)
        else:
            edit = Edit(self.prev_end, start, b",", EditKind.COMMA)
        self.result.edits.append(edit)

    def _finish(self) -> None:
        n = len(self.data)
        pending = self.expect in (_Expect.VALUE, _Expect.KEY, _Expect.COLON) and not (
            self.just_opened and self.stack
        )

        if self.truncated_at is None and not pending:
            self._close_all(tuple(self.stack))
            return

        offset = self.truncated_at if self.truncated_at is not None else n
        self._diag(offset, DiagnosticKind.TRUNCATED_DOCUMENT)
        if self.safe is None:
            self.result.tail_repairable = False
            return
        cut, stack = self.safe
        self.result.cut = cut
        self._close_all(stack)

    def _close_all(self, stack: Tuple[str, ...]) -> None:
        n = len(self.data)
        for opener in reversed(stack):
            self._diag(n, _MISSING_KIND[opener])
        self.result.suffix = b"".join(_CLOSER[o] for o in reversed(stack))

    def _diag(self, offset: int, kind: DiagnosticKind) -> None:
        self.result.diagnostics.append(Diagnostic.at(self.data, offset, kind))


# ------------------------------------------------
# ENTRY POINTS
# ------------------------------------------------


def _reject_constant(name: str):
    raise ValueError(f"Non-standard JSON constant: {name}")


def strict_loads(data: bytes):
    """json.loads that also rejects NaN/Infinity and non-UTF-8 input"""
    return json.loads(data.decode("utf-8"), parse_constant=_reject_constant)


def is_well_formed(data: bytes) -> bool:
    try:
        strict_loads(data)
        return True
    except (UnicodeDecodeError, ValueError):
        return False


def invalid_utf8_spans(data: bytes) -> List[Tuple[int, int]]:
    """Byte ranges that are not members of a valid UTF-8 sequence"""
    spans: List[Tuple[int, int]] = []
    pos = 0
    while pos < len(data):
        try:
            data[pos:].decode("utf-8")
            break
        except UnicodeDecodeError as e:
            spans.append((pos + e.start, pos + e.end))
            pos += e.end
    return spans


def _fallback(data: bytes) -> Diagnostic:
    """Position of the first error the strict parser reports"""
    try:
        strict_loads(data)
    except json.JSONDecodeError as e:
        return Diagnostic.at(data, len(e.doc[: e.pos].encode("utf-8")), DiagnosticKind.UNKNOWN_TOKEN)
    except (UnicodeDecodeError, ValueError):
        pass
    return Diagnostic.at(data, 0, DiagnosticKind.UNKNOWN_TOKEN)


def diagnose(data: bytes) -> List[Diagnostic]:
    """Every malformation found in the raw bytes; empty iff they parse as UTF-8 JSON"""
    if is_well_formed(data):
        return []

    spans = invalid_utf8_spans(data)
    skip = frozenset(i for start, end in spans for i in range(start, end))
    found = [Diagnostic.at(data, start, DiagnosticKind.NON_UTF8_BYTE) for start, _ in spans]
    found.extend(Scanner(data, skip=skip).run().diagnostics)

    if not found:
        found.append(_fallback(data))
    return sorted(found, key=lambda d: d.byte_offset)
