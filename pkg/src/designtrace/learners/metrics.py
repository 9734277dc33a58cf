# src/designtrace/learners/metrics.py
"""Classification and regression scores"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Dict, Sequence

import numpy as np

from ..errors import DomainError


def accuracy(predicted: Sequence[int], actual: Sequence[int]) -> float:
    """Fraction of positions where predicted equals actual"""
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)
    if predicted.shape != actual.shape:
        raise DomainError(f"Length mismatch: {predicted.shape} vs {actual.shape}")
    if predicted.size == 0:
        raise DomainError("accuracy of an empty label vector is undefined")
    return float(np.mean(predicted == actual))


def majority_fraction(labels: Sequence[int]) -> float:
    """max(positive fraction, negative fraction)"""
    labels = np.asarray(labels)
    if labels.size == 0:
        raise DomainError("majority fraction of an empty label vector is undefined")
    positive = float(np.mean(labels == 1))
    return max(positive, 1.0 - positive)


@dataclass(frozen=True)
class RegressionMetrics:
    rmse: float
    mae: float
    r2: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def regression_metrics(actual: Sequence[float], predicted: Sequence[float]) -> RegressionMetrics:
    """RMSE, MAE and R² (R² is 0 when actual is constant and matched, -inf-free)"""
    actual = np.asarray(actual, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if actual.shape != predicted.shape or actual.size == 0:
        raise DomainError("regression_metrics needs equal-length, nonempty vectors")

    residual = actual - predicted
    ss_res = float(residual @ residual)
    centered = actual - actual.mean()
    ss_tot = float(centered @ centered)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)

    return RegressionMetrics(
        rmse=float(np.sqrt(np.mean(residual**2))),
        mae=float(np.mean(np.abs(residual))),
        r2=r2,
    )
