# src/designtrace/models.py
"""
Domain types shared by every stage of the pipeline

All types are frozen after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError


class ActionCategory(Enum):
    """The 13 design-action categories and their numeric codes"""

    DOOR = 0
    FLOOR = 1
    FOUNDATION = 2
    WALL = 3
    WINDOW = 4
    ROOF = 5
    SOLAR_PANEL = 6
    TREE = 7
    BUILDING = 8
    ANALYSIS = 9
    PARAMETERS = 10
    THERMAL = 11
    COLOR = 12

    @property
    def code(self) -> int:
        return self.value

    @property
    def label(self) -> str:
        """CamelCase display name, e.g. SolarPanel"""
        return "".join(part.capitalize() for part in self.name.split("_"))


N_CATEGORIES = len(ActionCategory)

# One past the last real code; marks padding in sequence matrices.
PAD_CODE = N_CATEGORIES


def category_of_code(code: int) -> ActionCategory:
    """Category for a numeric code in 0..12"""
    if isinstance(code, bool) or not isinstance(code, (int, np.integer)):
        raise DomainError(f"Category code must be an integer, got {code!r}")
    if not 0 <= code < N_CATEGORIES:
        raise DomainError(f"Category code out of range 0..{N_CATEGORIES - 1}: {code}")
    return ActionCategory(int(code))


class FeatureKind(Enum):
    TALLY = "tally"
    SEQUENCE = "sequence"


class ModelFamily(Enum):
    LINEAR = "linear"
    LOGISTIC = "logistic"


def to_utc(ts: datetime) -> datetime:
    """Normalize to an aware UTC instant with millisecond precision"""
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    ts = ts.astimezone(timezone.utc)
    return ts.replace(microsecond=(ts.microsecond // 1000) * 1000)


@dataclass(frozen=True)
class DesignAction:
    """One timestamped log event"""

    timestamp: datetime
    raw_name: str
    category: ActionCategory

    def __post_init__(self):
        if not self.raw_name:
            raise DomainError("DesignAction.raw_name must be non-empty")
        if not isinstance(self.category, ActionCategory):
            raise DomainError(f"Unmapped category for {self.raw_name!r}")
        object.__setattr__(self, "timestamp", to_utc(self.timestamp))


@dataclass(frozen=True)
class SessionLog:
    """One student's ordered actions plus the final net energy outcome (kWh/year)"""

    student_id: str
    actions: Tuple[DesignAction, ...] = ()
    final_net_energy: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        for prev, cur in zip(self.actions, self.actions[1:]):
            if cur.timestamp < prev.timestamp:
                raise DomainError(f"{self.student_id}: actions are not in timestamp order")
        if self.final_net_energy is not None:
            if not math.isfinite(self.final_net_energy):
                raise DomainError(f"{self.student_id}: final_net_energy must be finite")
            object.__setattr__(self, "final_net_energy", float(self.final_net_energy))

    @property
    def is_labeled(self) -> bool:
        return self.final_net_energy is not None

    def __len__(self) -> int:
        return len(self.actions)


@dataclass(frozen=True)
class Cohort:
    sessions: Tuple[SessionLog, ...] = ()
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sessions", tuple(self.sessions))
        seen = set()
        for session in self.sessions:
            if session.student_id in seen:
                raise DomainError(f"Duplicate student_id in cohort: {session.student_id}")
            seen.add(session.student_id)

    @property
    def student_ids(self) -> Tuple[str, ...]:
        return tuple(s.student_id for s in self.sessions)

    def energies(self) -> np.ndarray:
        """Final net energies (NaN where absent)"""
        return np.array(
            [np.nan if s.final_net_energy is None else s.final_net_energy for s in self.sessions],
            dtype=float,
        )

    def __len__(self) -> int:
        return len(self.sessions)


@dataclass(frozen=True)
class Standardization:
    """Per-feature (mean, stddev) pairs; every stddev is > 0"""

    means: Tuple[float, ...]
    stddevs: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))
        object.__setattr__(self, "stddevs", tuple(float(s) for s in self.stddevs))
        if len(self.means) != len(self.stddevs):
            raise DomainError("Standardization means/stddevs length mismatch")
        if any(not s > 0 for s in self.stddevs):
            raise DomainError("Standardization stddevs must all be > 0")

    def __len__(self) -> int:
        return len(self.means)

    def pairs(self) -> list:
        return [[m, s] for m, s in zip(self.means, self.stddevs)]


@dataclass(frozen=True)
class ModelWeights:
    """Fitted coefficients and intercept for either regression family"""

    coefficients: Tuple[float, ...]
    intercept: float
    family: ModelFamily
    feature_kind: FeatureKind
    standardization: Optional[Standardization] = None
    pad_length: Optional[int] = None
    pad_code: Optional[int] = None
    final_loss: Optional[float] = None
    iterations: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(float(c) for c in np.ravel(self.coefficients))
        )
        object.__setattr__(self, "intercept", float(self.intercept))
        if self.standardization is not None and len(self.standardization) != len(
            self.coefficients
        ):
            raise DomainError("Standardization length must equal coefficient count")

    @property
    def n_features(self) -> int:
        return len(self.coefficients)

    def coef_array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    @classmethod
    def zeros(cls, n_features: int, family: ModelFamily, feature_kind: FeatureKind) -> "ModelWeights":
        return cls(
            coefficients=(0.0,) * n_features,
            intercept=0.0,
            family=family,
            feature_kind=feature_kind,
        )
