# src/designtrace/synth/manifest.py
"""
manifest.csv (file, label, net_energy_kwh, n_actions, corrupted) and the
generated-vs-recovered agreement check
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Sequence

import pandas as pd

from ..errors import DataError
from ..learners.dataset import binarize
from ..models import Cohort
from ..utils import PathLike, read_bytes, write_bytes
from .generator import ManifestEntry

logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = ["file", "label", "net_energy_kwh", "n_actions", "corrupted"]


class MismatchKind(Enum):
    LABEL = "label"
    MISSING = "missing"
    ENERGY = "energy"
    ACTIONS = "actions"


@dataclass(frozen=True)
class Mismatch:
    file: str
    kind: MismatchKind
    detail: str


@dataclass
class ManifestCheck:
    """Outcome of verify_manifest; `mismatches` is empty when everything agrees"""

    band: float
    checked: int = 0
    recovered: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def count(self, kind: MismatchKind) -> int:
        return sum(1 for m in self.mismatches if m.kind == kind)


def write_manifest(entries: Sequence[ManifestEntry], path: PathLike) -> Path:
    frame = pd.DataFrame(
        [
            {
                "file": e.file,
                "label": e.label,
                "net_energy_kwh": e.net_energy_kwh,
                "n_actions": e.n_actions,
                "corrupted": e.corrupted,
            }
            for e in entries
        ],
        columns=MANIFEST_COLUMNS,
    )
    buffer = io.StringIO()
    # repr-precision floats so planted energies survive the round trip
    frame.to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
    return write_bytes(path, buffer.getvalue().encode("utf-8"))


def read_manifest(path: PathLike) -> List[ManifestEntry]:
    try:
        frame = pd.read_csv(io.BytesIO(read_bytes(path)), dtype={"file": str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"Cannot read manifest {path}: {e}") from e
    missing = [c for c in MANIFEST_COLUMNS if c not in frame.columns]
    if missing:
        raise DataError(f"Manifest {path} missing columns: {', '.join(missing)}")
    return [
        ManifestEntry(
            file=row.file,
            label=int(row.label),
            net_energy_kwh=float(row.net_energy_kwh),
            n_actions=int(row.n_actions),
            corrupted=bool(row.corrupted),
        )
        for row in frame.itertuples(index=False)
    ]


def verify_manifest(manifest: Sequence[ManifestEntry], cohort: Cohort, band: float) -> ManifestCheck:
    """
    Compare planted ground truth against a cohort loaded from the generated directory.

    Reports a `label` mismatch wherever binarize(planted energy, band) disagrees with the
    planted label, and for every non-corrupted file checks that it was recovered with
    the planted energy and action count.
    """
    by_id = {s.student_id: s for s in cohort.sessions}
    check = ManifestCheck(band=float(band))

    for entry in manifest:
        check.checked += 1
        if binarize(entry.net_energy_kwh, band) != entry.label:
            check.mismatches.append(
                Mismatch(entry.file, MismatchKind.LABEL, f"{entry.net_energy_kwh:g} kWh vs label {entry.label}")
            )

        session = by_id.get(entry.student_id)
        if session is not None:
            check.recovered += 1
        if entry.corrupted:
            continue

        if session is None:
            check.mismatches.append(Mismatch(entry.file, MismatchKind.MISSING, "not in cohort"))
            continue
        if session.final_net_energy != entry.net_energy_kwh:
            check.mismatches.append(
                Mismatch(entry.file, MismatchKind.ENERGY, f"recovered {session.final_net_energy}")
            )
        if len(session) != entry.n_actions:
            check.mismatches.append(
                Mismatch(entry.file, MismatchKind.ACTIONS, f"recovered {len(session)} action(s)")
            )

    if check.ok:
        logger.info(f"Manifest agrees with cohort ({check.checked} entries, band {band:g})")
    else:
        logger.warning(f"Manifest check: {len(check.mismatches)} mismatch(es) at band {band:g}")
    return check
