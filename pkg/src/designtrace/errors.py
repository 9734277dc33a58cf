# src/designtrace/errors.py
"""
Structured exceptions for the design-log pipeline
"""
from __future__ import annotations

from typing import Optional


class DesignTraceError(Exception):
    """Base exception for all designtrace errors"""

    pass


class DomainError(DesignTraceError, ValueError):
    """Argument outside its documented domain"""

    pass


class DataError(DesignTraceError):
    """The data cannot support the requested operation"""

    pass


class SessionParseError(DataError):
    """Session JSON does not match the session schema"""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class UnmappedActionError(DataError):
    """No category rule matches a raw action name"""

    def __init__(self, raw_name: str):
        super().__init__(f"No category rule matches action {raw_name!r}")
        self.raw_name = raw_name


class DegenerateLabelsError(DataError):
    """Training labels contain a single class"""

    pass


class InsufficientDataError(DataError, DomainError):
    """Too few rows for the requested operation"""

    pass


class EmptyCohortError(DataError, DomainError):
    """Cohort has no usable sessions"""

    pass


class UnrepairableCorpusError(DataError):
    """Every scanned file was unrepairable"""

    pass


class MappingConfigError(DataError):
    """Category mapping file is invalid"""

    pass


class DataIOError(DesignTraceError, OSError):
    """Filesystem operation failed"""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path
