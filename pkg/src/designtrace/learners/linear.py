# src/designtrace/learners/linear.py
"""Ordinary least squares via the normal equations"""

from __future__ import annotations

import logging
from typing import Union

import numpy as np

from ..errors import DataError, DomainError, InsufficientDataError
from ..features.encode import FeatureMatrix
from ..models import ModelFamily, ModelWeights
from .dataset import Dataset, TargetKind

logger = logging.getLogger(__name__)

RIDGE_JITTER = 1e-8

Features = Union[FeatureMatrix, np.ndarray]


def design_matrix(w: ModelWeights, features: Features) -> np.ndarray:
    """Raw feature rows → the model's input space (standardized when the model is)"""
    X = features.values if isinstance(features, FeatureMatrix) else np.asarray(features, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != w.n_features:
        raise DomainError(f"Model expects {w.n_features} features, got {X.shape[1]}")
    if w.standardization is not None:
        X = (X - np.asarray(w.standardization.means)) / np.asarray(w.standardization.stddevs)
    return X


def fit_linear(train: Dataset) -> ModelWeights:
    """Least squares on [1 | X] with RIDGE_JITTER added to the Gram diagonal"""
    if train.target_kind is not TargetKind.ENERGY:
        raise DomainError("fit_linear needs energy targets")
    n = train.n_rows
    if n < 2:
        raise InsufficientDataError(f"fit_linear needs >= 2 rows, got {n}")

    X = train.features.values
    Xb = np.c_[np.ones(n), X]
    gram = Xb.T @ Xb
    gram[np.diag_indices_from(gram)] += RIDGE_JITTER

    try:
        beta = np.linalg.solve(gram, Xb.T @ train.targets)
    except np.linalg.LinAlgError as e:
        raise DataError(f"Normal equations are singular: {e}") from e

    residual = Xb @ beta - train.targets
    logger.debug(f"fit_linear: n={n} k={X.shape[1]} rmse={np.sqrt(np.mean(residual ** 2)):.6g}")

    return ModelWeights(
        coefficients=tuple(beta[1:]),
        intercept=float(beta[0]),
        family=ModelFamily.LINEAR,
        feature_kind=train.features.feature_kind,
        pad_length=train.features.pad_length,
        pad_code=train.features.pad_code,
    )


def predict_linear(w: ModelWeights, features: Features) -> np.ndarray:
    """intercept + X·coefficients (kWh)"""
    if w.family is not ModelFamily.LINEAR:
        raise DomainError(f"predict_linear needs a linear model, got {w.family.value}")
    return w.intercept + design_matrix(w, features) @ w.coef_array()
