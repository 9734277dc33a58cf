# src/designtrace/learners/pipeline.py
"""
Leak-free glue between features and learners

Padding width and standardization are always fit on the training rows only; the fitted
ModelWeights carry both so test rows (or a saved model) are transformed identically.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError
from ..features.encode import (
    FeatureMatrix,
    encode_sequence,
    fit_pad_length,
    pad_matrix,
    prefix,
    tally_matrix,
)
from ..features.standardize import apply_standardizer, fit_standardizer
from ..models import FeatureKind, ModelFamily, ModelWeights, SessionLog
from .dataset import Dataset
from .linear import Features, fit_linear, predict_linear
from .logistic import LogisticHyper, fit_logistic, predict_logistic


def split_matrices(
    sessions: Sequence[SessionLog],
    kind: FeatureKind,
    train_idx: Sequence[int],
    test_idx: Sequence[int],
    fraction: float = 1.0,
) -> Tuple[FeatureMatrix, FeatureMatrix]:
    """
    Train and test feature matrices for one split.

    Sequences are prefixed to `fraction`, padded to the longest training sequence, and
    test rows are truncated or padded to that same width.
    """
    if kind is FeatureKind.TALLY:
        full = tally_matrix(sessions)
        return full.take(train_idx), full.take(test_idx)

    seqs = [prefix(encode_sequence(s), fraction) for s in sessions]
    ids = [s.student_id for s in sessions]
    train_seqs = [seqs[i] for i in train_idx]
    width = fit_pad_length(train_seqs)
    train = pad_matrix(train_seqs, [ids[i] for i in train_idx], pad_length=width)
    test = pad_matrix([seqs[i] for i in test_idx], [ids[i] for i in test_idx], pad_length=width)
    return train, test


def fit_model(
    train: Dataset,
    family: ModelFamily,
    hyper: Optional[LogisticHyper] = None,
    standardize: bool = True,
) -> ModelWeights:
    """Fit either family, standardizing on the training rows first when asked"""
    stats = fit_standardizer(train.features) if standardize else None
    fit_on = train if stats is None else replace(train, features=apply_standardizer(train.features, stats))

    if family is ModelFamily.LINEAR:
        weights = fit_linear(fit_on)
    else:
        weights = fit_logistic(fit_on, hyper or LogisticHyper())
    return replace(weights, standardization=stats)


def predict(weights: ModelWeights, features: Features) -> np.ndarray:
    """Energies for linear models, 0/1 labels for logistic ones"""
    if isinstance(features, FeatureMatrix) and features.feature_kind is not weights.feature_kind:
        raise DomainError(
            f"Model was fit on {weights.feature_kind.value} features, got {features.feature_kind.value}"
        )
    if weights.family is ModelFamily.LINEAR:
        return predict_linear(weights, features)
    return predict_logistic(weights, features)
