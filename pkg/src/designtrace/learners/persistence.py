# src/designtrace/learners/persistence.py
"""
Model file (JSON):

    { "family": "...", "intercept": x, "coefficients": [...], "standardization": [[mean, std], ...],
      "feature_kind": "...", "pad_length": n, "pad_code": 13 }

plus optional "final_loss" / "iterations" for logistic fits.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict

from ..errors import DataError, DomainError
from ..json_safe import json_safe
from ..models import FeatureKind, ModelFamily, ModelWeights, Standardization
from ..utils import PathLike, read_bytes, write_bytes

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("family", "intercept", "coefficients", "feature_kind")


def model_to_dict(w: ModelWeights) -> Dict[str, Any]:
    return {
        "family": w.family.value,
        "intercept": w.intercept,
        "coefficients": list(w.coefficients),
        "standardization": None if w.standardization is None else w.standardization.pairs(),
        "feature_kind": w.feature_kind.value,
        "pad_length": w.pad_length,
        "pad_code": w.pad_code,
        "final_loss": w.final_loss,
        "iterations": w.iterations,
    }


def model_from_dict(raw: Dict[str, Any]) -> ModelWeights:
    missing = [f for f in REQUIRED_FIELDS if f not in raw]
    if missing:
        raise DataError(f"Model file missing fields: {', '.join(missing)}")

    try:
        stats = raw.get("standardization")
        standardization = (
            None
            if stats is None
            else Standardization(means=[p[0] for p in stats], stddevs=[p[1] for p in stats])
        )
        return ModelWeights(
            coefficients=tuple(raw["coefficients"]),
            intercept=raw["intercept"],
            family=ModelFamily(raw["family"]),
            feature_kind=FeatureKind(raw["feature_kind"]),
            standardization=standardization,
            pad_length=raw.get("pad_length"),
            pad_code=raw.get("pad_code"),
            final_loss=raw.get("final_loss"),
            iterations=raw.get("iterations"),
        )
    except (TypeError, ValueError, IndexError, DomainError) as e:
        raise DataError(f"Invalid model file: {e}") from e


def save_model(w: ModelWeights, path: PathLike) -> Path:
    text = json.dumps(model_to_dict(w), indent=2, sort_keys=True, default=json_safe)
    logger.info(f"Saving {w.family.value} model ({w.n_features} features) to {path}")
    return write_bytes(path, (text + "\n").encode("utf-8"))


def load_model(path: PathLike) -> ModelWeights:
    try:
        raw = json.loads(read_bytes(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DataError(f"Model file {path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise DataError(f"Model file {path} must hold an object")
    return model_from_dict(raw)
