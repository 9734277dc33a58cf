# src/designtrace/learners/dataset.py
"""
Datasets, outcome binarization and seeded train/test splitting
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError, InsufficientDataError
from ..features.encode import FeatureMatrix
from ..models import Cohort
from ..utils import ceil_count, require_finite, require_fraction

logger = logging.getLogger(__name__)

MIN_SPLIT_ROWS = 5
SEED_MODULUS = 2**64


class TargetKind(Enum):
    ENERGY = "energy"
    SUCCESS_LABEL = "success_label"


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature rows with one target per row"""

    features: FeatureMatrix
    targets: np.ndarray
    target_kind: TargetKind

    def __post_init__(self):
        targets = np.array(self.targets, dtype=float).ravel()
        targets.setflags(write=False)
        object.__setattr__(self, "targets", targets)

        if len(targets) != self.features.n_rows:
            raise DomainError(
                f"{len(targets)} targets for {self.features.n_rows} feature rows"
            )
        if not np.all(np.isfinite(targets)):
            raise DomainError("Dataset targets must be finite")
        if self.target_kind is TargetKind.SUCCESS_LABEL and not np.all(
            (targets == 0.0) | (targets == 1.0)
        ):
            raise DomainError("Success labels must be 0 or 1")

    @property
    def n_rows(self) -> int:
        return len(self.targets)

    @property
    def classes(self) -> Tuple[int, ...]:
        return tuple(int(c) for c in np.unique(self.targets))

    def take(self, indices: Sequence[int]) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.features.take(idx), self.targets[idx], self.target_kind)


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.2
    seed: int = 0
    stratify: bool = False

    def __post_init__(self):
        require_fraction(self.test_fraction, "test_fraction", allow_one=False)
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)):
            raise DomainError(f"seed must be an integer, got {self.seed!r}")


# ------------------------------------------------
# LABELS
# ------------------------------------------------


def binarize(net_energy: float, band: float) -> int:
    """1 iff -band <= net_energy <= band"""
    net_energy = require_finite(net_energy, "net_energy")
    band = require_finite(band, "band")
    if band <= 0:
        raise DomainError(f"band must be > 0, got {band}")
    return int(-band <= net_energy <= band)


def binarize_all(energies: Sequence[float], band: float) -> np.ndarray:
    return np.array([binarize(e, band) for e in energies], dtype=int)


def filter_labeled(cohort: Cohort) -> Cohort:
    """Sessions with a final net energy, in original order"""
    kept = [s for s in cohort.sessions if s.is_labeled]
    if len(kept) < len(cohort):
        logger.info(f"Dropped {len(cohort) - len(kept)} session(s) without a final net energy")
    return Cohort(sessions=kept, provenance=cohort.provenance)


def energy_dataset(features: FeatureMatrix, energies: Sequence[float]) -> Dataset:
    return Dataset(features, np.asarray(energies, dtype=float), TargetKind.ENERGY)


def label_dataset(features: FeatureMatrix, energies: Sequence[float], band: float) -> Dataset:
    return Dataset(features, binarize_all(energies, band), TargetKind.SUCCESS_LABEL)


# ------------------------------------------------
# SPLITTING
# ------------------------------------------------


def _stratified_test_counts(labels: np.ndarray, n_test: int) -> dict:
    """Largest-remainder allocation of n_test across classes"""
    classes, sizes = np.unique(labels, return_counts=True)
    n = len(labels)
    quotas = [n_test * size / n for size in sizes]
    counts = {c: math.floor(q) for c, q in zip(classes, quotas)}
    remaining = n_test - sum(counts.values())
    by_remainder = sorted(
        range(len(classes)), key=lambda i: (-(quotas[i] - math.floor(quotas[i])), i)
    )
    for i in by_remainder[:remaining]:
        counts[classes[i]] += 1
    return counts


def split_indices(
    n: int, spec: SplitSpec, labels: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Seeded partition of range(n) into (train, test) index arrays, each sorted.

    The test side holds ceil(test_fraction × n) rows.
    """
    if n < MIN_SPLIT_ROWS:
        raise InsufficientDataError(f"Splitting needs >= {MIN_SPLIT_ROWS} rows, got {n}")
    n_test = ceil_count(spec.test_fraction, n)
    if n_test >= n:
        raise InsufficientDataError(
            f"test_fraction {spec.test_fraction} leaves no training rows out of {n}"
        )

    rng = np.random.default_rng(int(spec.seed) % SEED_MODULUS)

    if spec.stratify:
        if labels is None:
            raise DomainError("Stratified split needs labels")
        labels = np.asarray(labels)
        test_parts = []
        for cls, count in _stratified_test_counts(labels, n_test).items():
            members = np.flatnonzero(labels == cls)
            test_parts.append(members[rng.permutation(len(members))[:count]])
        test = np.sort(np.concatenate(test_parts))
    else:
        test = np.sort(rng.permutation(n)[:n_test])

    train = np.setdiff1d(np.arange(n), test)
    return train, test


def split(d: Dataset, spec: SplitSpec) -> Tuple[Dataset, Dataset]:
    labels = d.targets if spec.stratify else None
    train_idx, test_idx = split_indices(d.n_rows, spec, labels)
    return d.take(train_idx), d.take(test_idx)
