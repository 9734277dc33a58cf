# src/designtrace/features/encode.py
"""
Tallied-count and coded-sequence feature representations
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError
from ..models import N_CATEGORIES, PAD_CODE, FeatureKind, SessionLog
from ..utils import ceil_count, require_fraction


@dataclass(frozen=True)
class CountVector:
    """Per-category action counts, indexed by category code"""

    counts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.counts) != N_CATEGORIES:
            raise DomainError(f"CountVector needs {N_CATEGORIES} counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise DomainError("CountVector counts must be nonnegative")

    def __getitem__(self, code: int) -> int:
        return self.counts[code]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float)


@dataclass(frozen=True)
class CodeSequence:
    """Category codes of a session's actions in timestamp order"""

    codes: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "codes", tuple(int(c) for c in self.codes))
        if any(not 0 <= c < N_CATEGORIES for c in self.codes):
            raise DomainError(f"CodeSequence codes must lie in 0..{N_CATEGORIES - 1}")

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.codes)


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Rows are students, columns are features; values are read-only"""

    values: np.ndarray
    row_ids: Tuple[str, ...]
    feature_kind: FeatureKind
    pad_code: Optional[int] = None
    pad_length: Optional[int] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise DomainError(f"FeatureMatrix values must be 2-D, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "row_ids", tuple(self.row_ids))

        if len(self.row_ids) != values.shape[0]:
            raise DomainError(
                f"row_ids length {len(self.row_ids)} != row count {values.shape[0]}"
            )
        if self.feature_kind is FeatureKind.TALLY and values.shape[1] != N_CATEGORIES:
            raise DomainError(f"Tally matrices have {N_CATEGORIES} columns, got {values.shape[1]}")
        if self.feature_kind is FeatureKind.SEQUENCE:
            if self.pad_code is None or self.pad_length is None:
                raise DomainError("Sequence matrices need pad_code and pad_length")
            if self.pad_length != values.shape[1]:
                raise DomainError(
                    f"pad_length {self.pad_length} != column count {values.shape[1]}"
                )

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def take(self, indices: Sequence[int]) -> "FeatureMatrix":
        """Subset of rows, metadata preserved"""
        idx = np.asarray(indices, dtype=int)
        return self.with_values(self.values[idx], tuple(self.row_ids[i] for i in idx))

    def with_values(self, values: np.ndarray, row_ids: Optional[Tuple[str, ...]] = None) -> "FeatureMatrix":
        return FeatureMatrix(
            values=values,
            row_ids=self.row_ids if row_ids is None else row_ids,
            feature_kind=self.feature_kind,
            pad_code=self.pad_code,
            pad_length=self.pad_length,
        )


# ------------------------------------------------
# SINGLE SESSION
# ------------------------------------------------


def tally(session: SessionLog) -> CountVector:
    codes = np.asarray([a.category.code for a in session.actions], dtype=int)
    counts = np.bincount(codes, minlength=N_CATEGORIES)
    return CountVector(tuple(counts))


def encode_sequence(session: SessionLog) -> CodeSequence:
    return CodeSequence(tuple(a.category.code for a in session.actions))


def prefix(seq: CodeSequence, fraction: float) -> CodeSequence:
    """First ceil(fraction × len) codes"""
    fraction = require_fraction(fraction, "prefix fraction")
    return CodeSequence(seq.codes[: ceil_count(fraction, len(seq))])


# ------------------------------------------------
# MATRICES
# ------------------------------------------------


def fit_pad_length(seqs: Sequence[CodeSequence]) -> int:
    """Longest sequence length (at least 1 so the matrix has a column)"""
    return max([len(s) for s in seqs] + [1])


def pad_matrix(
    seqs: Sequence[CodeSequence],
    ids: Sequence[str],
    pad_length: Optional[int] = None,
    pad_code: int = PAD_CODE,
) -> FeatureMatrix:
    """
    Right-pad sequences with pad_code into a fixed-width matrix.

    When pad_length is given (fit on a training split) longer rows are truncated to it.
    """
    if not seqs:
        raise DomainError("pad_matrix needs at least one sequence")
    if len(seqs) != len(ids):
        raise DomainError(f"{len(seqs)} sequences but {len(ids)} ids")

    width = fit_pad_length(seqs) if pad_length is None else int(pad_length)
    if width < 1:
        raise DomainError(f"pad_length must be >= 1, got {pad_length}")

    values = np.full((len(seqs), width), pad_code, dtype=float)
    for row, seq in enumerate(seqs):
        codes = seq.codes[:width]
        values[row, : len(codes)] = codes

    return FeatureMatrix(
        values=values,
        row_ids=tuple(ids),
        feature_kind=FeatureKind.SEQUENCE,
        pad_code=pad_code,
        pad_length=width,
    )


def tally_matrix(sessions: Sequence[SessionLog]) -> FeatureMatrix:
    rows = np.zeros((len(sessions), N_CATEGORIES), dtype=float)
    for i, session in enumerate(sessions):
        rows[i] = tally(session).as_array()
    return FeatureMatrix(
        values=rows,
        row_ids=tuple(s.student_id for s in sessions),
        feature_kind=FeatureKind.TALLY,
    )


def sequence_matrix(
    sessions: Sequence[SessionLog], fraction: float = 1.0, pad_length: Optional[int] = None
) -> FeatureMatrix:
    seqs = [prefix(encode_sequence(s), fraction) for s in sessions]
    return pad_matrix(seqs, [s.student_id for s in sessions], pad_length=pad_length)


def feature_matrix(
    sessions: Sequence[SessionLog],
    kind: FeatureKind,
    fraction: float = 1.0,
    pad_length: Optional[int] = None,
) -> FeatureMatrix:
    """Either representation; fraction only applies to sequences"""
    if kind is FeatureKind.TALLY:
        return tally_matrix(sessions)
    return sequence_matrix(sessions, fraction=fraction, pad_length=pad_length)
