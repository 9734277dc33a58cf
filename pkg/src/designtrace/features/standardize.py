# src/designtrace/features/standardize.py
"""Per-feature standardization fit on a training matrix"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ..models import Standardization
from .encode import FeatureMatrix

MIN_STDDEV = 1e-12


def fit_standardizer(train: FeatureMatrix) -> Standardization:
    """Column means and population stddevs; near-constant columns get stddev 1"""
    if train.n_rows < 2:
        raise DomainError(f"fit_standardizer needs >= 2 rows, got {train.n_rows}")
    means = train.values.mean(axis=0)
    stddevs = train.values.std(axis=0, ddof=0)
    stddevs = np.where(stddevs < MIN_STDDEV, 1.0, stddevs)
    return Standardization(means=tuple(means), stddevs=tuple(stddevs))


def _check_width(m: FeatureMatrix, stats: Standardization) -> None:
    if len(stats) != m.n_features:
        raise DomainError(
            f"Standardization has {len(stats)} features, matrix has {m.n_features}"
        )


def apply_standardizer(m: FeatureMatrix, stats: Standardization) -> FeatureMatrix:
    _check_width(m, stats)
    means = np.asarray(stats.means)
    stddevs = np.asarray(stats.stddevs)
    return m.with_values((m.values - means) / stddevs)


def unstandardize(m: FeatureMatrix, stats: Standardization) -> FeatureMatrix:
    _check_width(m, stats)
    return m.with_values(m.values * np.asarray(stats.stddevs) + np.asarray(stats.means))
