# src/designtrace/learners/logistic.py
"""
L2-regularized logistic regression trained by full-batch gradient descent

Objective (n rows, λ = l2_strength, c = coefficients, b = intercept):

    mean( log(1 + e^z) - y·z ) + (λ / 2n)·‖c‖²      with z = b + X·c

The intercept is not regularized. All exponentials go through logaddexp.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import DegenerateLabelsError, DomainError
from ..models import ModelFamily, ModelWeights
from ..utils import require_finite
from .dataset import Dataset, TargetKind
from .linear import Features, design_matrix

logger = logging.getLogger(__name__)

MAX_HALVINGS = 40


@dataclass(frozen=True)
class LogisticHyper:
    learning_rate: float = 0.1
    max_iters: int = 5000
    l2_strength: float = 1.0
    tolerance: float = 1e-6

    def __post_init__(self):
        for name in ("learning_rate", "l2_strength", "tolerance"):
            if require_finite(getattr(self, name), name) <= 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")
        if isinstance(self.max_iters, bool) or not isinstance(self.max_iters, int) or self.max_iters < 1:
            raise DomainError(f"max_iters must be a positive integer, got {self.max_iters!r}")


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Overflow-free logistic function; exactly 0.5 at z = 0"""
    z = np.asarray(z, dtype=float)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def _objective(beta: np.ndarray, Xb: np.ndarray, y: np.ndarray, l2: float) -> Tuple[float, np.ndarray]:
    n = len(y)
    z = Xb @ beta
    coef = beta[1:]
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z) + l2 / (2 * n) * coef @ coef)
    grad = Xb.T @ (sigmoid(z) - y) / n
    grad[1:] += l2 / n * coef
    return loss, grad


def _with_intercept(X: np.ndarray) -> np.ndarray:
    return np.c_[np.ones(X.shape[0]), X]


def logistic_loss_grad(
    w: ModelWeights, d: Dataset, hyper: LogisticHyper = LogisticHyper()
) -> Tuple[float, np.ndarray]:
    """
    Loss and gradient at w on d's features as given.

    Returns:
        (loss, grad) with grad ordered (intercept, coefficients...)
    """
    if d.target_kind is not TargetKind.SUCCESS_LABEL:
        raise DomainError("logistic_loss_grad needs success labels")
    if w.n_features != d.features.n_features:
        raise DomainError(f"Model has {w.n_features} coefficients, data has {d.features.n_features} features")
    beta = np.r_[w.intercept, w.coef_array()]
    return _objective(beta, _with_intercept(d.features.values), d.targets, hyper.l2_strength)


def fit_logistic(train: Dataset, hyper: LogisticHyper = LogisticHyper()) -> ModelWeights:
    """
    Gradient descent from all-zero weights.

    Each step starts at the configured learning rate and is halved until the objective
    does not increase; iteration stops when the gradient ∞-norm reaches the tolerance,
    no decreasing step exists, or max_iters is hit.
    """
    if train.target_kind is not TargetKind.SUCCESS_LABEL:
        raise DomainError("fit_logistic needs success labels")
    if len(train.classes) < 2:
        raise DegenerateLabelsError(
            f"Training labels are all {train.classes[0] if train.classes else 'absent'}"
        )

    Xb = _with_intercept(train.features.values)
    y = train.targets
    l2 = hyper.l2_strength

    beta = np.zeros(Xb.shape[1])
    loss, grad = _objective(beta, Xb, y, l2)
    iterations = 0

    while iterations < hyper.max_iters and np.max(np.abs(grad)) > hyper.tolerance:
        step = hyper.learning_rate
        for _ in range(MAX_HALVINGS):
            candidate = beta - step * grad
            cand_loss, cand_grad = _objective(candidate, Xb, y, l2)
            if cand_loss <= loss:
                break
            step /= 2
        else:
            logger.debug(f"fit_logistic: no decreasing step after {iterations} iterations")
            break
        beta, loss, grad = candidate, cand_loss, cand_grad
        iterations += 1

    logger.debug(
        f"fit_logistic: n={len(y)} k={Xb.shape[1] - 1} iterations={iterations} "
        f"loss={loss:.6g} |grad|={np.max(np.abs(grad)):.3g}"
    )

    return ModelWeights(
        coefficients=tuple(beta[1:]),
        intercept=float(beta[0]),
        family=ModelFamily.LOGISTIC,
        feature_kind=train.features.feature_kind,
        pad_length=train.features.pad_length,
        pad_code=train.features.pad_code,
        final_loss=loss,
        iterations=iterations,
    )


def predict_proba(w: ModelWeights, features: Features) -> np.ndarray:
    if w.family is not ModelFamily.LOGISTIC:
        raise DomainError(f"Expected a logistic model, got {w.family.value}")
    return sigmoid(w.intercept + design_matrix(w, features) @ w.coef_array())


def predict_logistic(w: ModelWeights, features: Features, threshold: float = 0.5) -> np.ndarray:
    """Label 1 iff sigmoid(intercept + x·coefficients) >= threshold"""
    return (predict_proba(w, features) >= threshold).astype(int)
