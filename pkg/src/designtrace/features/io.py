# src/designtrace/features/io.py
"""
features.csv: student_id, f0..f(k-1), final_net_energy (empty when absent)
"""

from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import DataError, DomainError
from ..models import PAD_CODE, FeatureKind
from ..utils import PathLike, read_bytes, write_bytes
from .encode import FeatureMatrix

logger = logging.getLogger(__name__)

ID_COLUMN = "student_id"
TARGET_COLUMN = "final_net_energy"
FLOAT_FORMAT = "%.6g"


def features_frame(matrix: FeatureMatrix, energies: Sequence[Optional[float]]) -> pd.DataFrame:
    if len(energies) != matrix.n_rows:
        raise DomainError(f"{len(energies)} energies for {matrix.n_rows} rows")
    frame = pd.DataFrame(
        matrix.values, columns=[f"f{j}" for j in range(matrix.n_features)]
    )
    frame.insert(0, ID_COLUMN, list(matrix.row_ids))
    frame[TARGET_COLUMN] = [np.nan if e is None else float(e) for e in energies]
    return frame


def write_features_csv(
    matrix: FeatureMatrix, energies: Sequence[Optional[float]], path: PathLike
) -> Path:
    buffer = io.StringIO()
    features_frame(matrix, energies).to_csv(
        buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    logger.info(f"Writing {matrix.n_rows}x{matrix.n_features} {matrix.feature_kind.value} features to {path}")
    return write_bytes(path, buffer.getvalue().encode("utf-8"))


def read_features_csv(
    path: PathLike, kind: FeatureKind = FeatureKind.TALLY
) -> Tuple[FeatureMatrix, np.ndarray]:
    """
    Read features.csv back.

    Returns:
        (matrix, energies) with NaN where the energy cell is empty
    """
    try:
        frame = pd.read_csv(io.BytesIO(read_bytes(path)), dtype={ID_COLUMN: str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataError(f"Cannot read features table {path}: {e}") from e

    if ID_COLUMN not in frame.columns or TARGET_COLUMN not in frame.columns:
        raise DataError(f"{path}: expected columns {ID_COLUMN!r} and {TARGET_COLUMN!r}")
    feature_cols = [c for c in frame.columns if c not in (ID_COLUMN, TARGET_COLUMN)]
    if not feature_cols:
        raise DataError(f"{path}: no feature columns")

    try:
        values = frame[feature_cols].to_numpy(dtype=float)
    except ValueError as e:
        raise DataError(f"{path}: non-numeric feature value: {e}") from e

    extra = {}
    if kind is FeatureKind.SEQUENCE:
        extra = {"pad_code": PAD_CODE, "pad_length": len(feature_cols)}
    try:
        matrix = FeatureMatrix(
            values=values, row_ids=tuple(frame[ID_COLUMN]), feature_kind=kind, **extra
        )
    except DomainError as e:
        raise DataError(f"{path}: {e}") from e
    return matrix, frame[TARGET_COLUMN].to_numpy(dtype=float)
