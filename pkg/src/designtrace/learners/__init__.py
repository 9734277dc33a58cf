"""From-scratch regression learners, splitting and scoring"""

from .dataset import (
    MIN_SPLIT_ROWS,
    Dataset,
    SplitSpec,
    TargetKind,
    binarize,
    binarize_all,
    energy_dataset,
    filter_labeled,
    label_dataset,
    split,
    split_indices,
)
from .linear import RIDGE_JITTER, fit_linear, predict_linear
from .logistic import (
    LogisticHyper,
    fit_logistic,
    logistic_loss_grad,
    predict_logistic,
    predict_proba,
    sigmoid,
)
from .metrics import RegressionMetrics, accuracy, majority_fraction, regression_metrics
from .persistence import load_model, model_from_dict, model_to_dict, save_model
from .pipeline import fit_model, predict, split_matrices

__all__ = [
    "Dataset",
    "SplitSpec",
    "TargetKind",
    "MIN_SPLIT_ROWS",
    "binarize",
    "binarize_all",
    "filter_labeled",
    "energy_dataset",
    "label_dataset",
    "split",
    "split_indices",
    "RIDGE_JITTER",
    "fit_linear",
    "predict_linear",
    "LogisticHyper",
    "logistic_loss_grad",
    "fit_logistic",
    "predict_logistic",
    "predict_proba",
    "sigmoid",
    "accuracy",
    "majority_fraction",
    "RegressionMetrics",
    "regression_metrics",
    "save_model",
    "load_model",
    "model_to_dict",
    "model_from_dict",
    "fit_model",
    "predict",
    "split_matrices",
]
