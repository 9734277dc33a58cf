# src/designtrace/utils.py
"""
Utility functions for validation, file access and logging
"""

import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Sequence, TextIO, TypeVar, Union

from .errors import DataIOError, DomainError
from .retry import io_retry

PathLike = Union[str, os.PathLike]

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def require_finite(value: float, name: str) -> float:
    """Reject NaN/inf (and non-numbers)"""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        try:
            value = float(value)  # numpy scalars
        except (TypeError, ValueError):
            raise DomainError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return float(value)


def require_fraction(value: float, name: str, *, allow_one: bool = True) -> float:
    """Validate a fraction in (0, 1] (or (0, 1) when allow_one is False)"""
    value = require_finite(value, name)
    upper_ok = value <= 1.0 if allow_one else value < 1.0
    if not (value > 0.0 and upper_ok):
        interval = "(0, 1]" if allow_one else "(0, 1)"
        raise DomainError(f"{name} must lie in {interval}, got {value}")
    return value


def ceil_count(fraction: float, n: int) -> int:
    """ceil(fraction * n), immune to float noise such as 0.3 * 10 = 3.0000000000000004"""
    return math.ceil(round(fraction * n, 9))


@io_retry
def _read(path: Path) -> bytes:
    with open(path, "rb") as f:
        return f.read()


@io_retry
def _write(path: Path, data: bytes) -> None:
    with open(path, "wb") as f:
        f.write(data)


def read_bytes(path: PathLike) -> bytes:
    """Read a whole file"""
    try:
        return _read(Path(path))
    except OSError as e:
        raise DataIOError(f"Read failed for {path}: {e}", path=str(path)) from e


def write_bytes(path: PathLike, data: bytes) -> Path:
    """Write a whole file, creating parent directories"""
    full_path = Path(path)
    try:
        full_path.parent.mkdir(parents=True, exist_ok=True)
        _write(full_path, data)
    except OSError as e:
        raise DataIOError(f"Write failed for {path}: {e}", path=str(path)) from e
    return full_path


def setup_logger(
    name: str = "designtrace", level: int = logging.INFO, stream: Optional[TextIO] = None
) -> logging.Logger:
    """Send the package's records to stderr (or stream); repeated calls replace the handler"""
    logger = logging.getLogger(name)
    logger.setLevel(level)
    for old in list(logger.handlers):
        logger.removeHandler(old)

    handler = logging.StreamHandler(sys.stderr if stream is None else stream)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    return logger


T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """Map over items, on a thread pool when workers > 1; results keep input order"""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
