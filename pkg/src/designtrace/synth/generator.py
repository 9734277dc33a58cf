# src/designtrace/synth/generator.py
"""
Synthetic per-student session logs with planted labels

Each student draws from its own generator, `default_rng([seed, index])`, so files are
independent of worker scheduling and of n_students.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import DomainError
from ..models import N_CATEGORIES, ActionCategory
from ..utils import PathLike, ordered_map, require_finite, write_bytes

logger = logging.getLogger(__name__)

SEED_MODULUS = 2**64

# Raw action names per category; each maps to its category under the default mapping
VOCABULARY: Dict[ActionCategory, Tuple[str, ...]] = {
    ActionCategory.DOOR: ("Add Door", "Edit Door", "Remove Door"),
    ActionCategory.FLOOR: ("Add Floor", "Edit Floor", "Remove Floor"),
    ActionCategory.FOUNDATION: ("Add Foundation", "Resize Foundation", "Remove Foundation"),
    ActionCategory.WALL: ("Add Wall", "Edit Wall", "Move Wall", "Remove Wall"),
    ActionCategory.WINDOW: ("Add Window", "Edit Window", "Remove Window"),
    ActionCategory.ROOF: ("Add Roof", "Edit Roof", "Remove Roof"),
    ActionCategory.SOLAR_PANEL: ("Add Solar Panel", "Move Solar Panel", "Rotate Solar Panel", "Remove Solar Panel"),
    ActionCategory.TREE: ("Add Tree", "Move Tree", "Remove Tree"),
    ActionCategory.BUILDING: ("Add Building", "Move Building", "Copy Building"),
    ActionCategory.ANALYSIS: ("Run Energy Analysis", "Show Heliodon", "Open Graph"),
    ActionCategory.PARAMETERS: ("Set Latitude", "Change Location", "Set Date", "Set Time"),
    ActionCategory.THERMAL: ("Set U-Value", "Edit Thermal Properties"),
    ActionCategory.COLOR: ("Change Color", "Edit Color"),
}
FINAL_ACTION = "Run Energy Analysis"

# Relative category frequencies shared by both classes (index = category code)
BASE_WEIGHTS = np.array([3, 4, 3, 10, 6, 5, 4, 3, 2, 3, 2, 2, 2], dtype=float)
ELEVATED_CODES = (
    ActionCategory.SOLAR_PANEL.code,
    ActionCategory.ANALYSIS.code,
    ActionCategory.THERMAL.code,
)
ELEVATION_GAIN = 4.0
EARLY_SHARE = 0.3

SUCCESS_RANGE = (-8000.0, 8000.0)
FAILURE_RANGE = (15_000.0, 80_000.0)
OUTLIER_RANGE = (150_000.0, 700_000.0)
OUTLIER_RATE = 0.015
INTERMEDIATE_ENERGY_RATE = 0.5

# energy_law="linear": net energy = LINEAR_INTERCEPT + LINEAR_WEIGHTS · tally
LINEAR_INTERCEPT = 20_000.0
LINEAR_WEIGHTS = (-60.0, -40.0, 30.0, -25.0, -35.0, 20.0, -180.0, -10.0, 50.0, -90.0, 0.0, -120.0, 5.0)
LINEAR_BAND = 10_000.0

START_TIME = datetime(2024, 1, 15, 9, 0, tzinfo=timezone.utc)

ENERGY_LAWS = ("band", "linear")
FAULTS = ("non_utf8", "deleted_comma", "truncation")


@dataclass(frozen=True)
class GenConfig:
    n_students: int = 128
    success_rate: float = 0.7
    signal: float = 0.9
    early_signal: float = 0.5
    length_range: Tuple[int, int] = (40, 300)
    corruption_rate: float = 0.0
    seed: int = 0
    energy_law: str = "band"

    def __post_init__(self):
        object.__setattr__(self, "length_range", tuple(self.length_range))
        if isinstance(self.n_students, bool) or not isinstance(self.n_students, int) or self.n_students < 1:
            raise DomainError(f"n_students must be a positive integer, got {self.n_students!r}")
        if not 0.0 < require_finite(self.success_rate, "success_rate") < 1.0:
            raise DomainError(f"success_rate must lie in (0, 1), got {self.success_rate}")
        for name in ("signal", "early_signal"):
            if not 0.0 <= require_finite(getattr(self, name), name) <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if not 0.0 <= require_finite(self.corruption_rate, "corruption_rate") < 1.0:
            raise DomainError(f"corruption_rate must lie in [0, 1), got {self.corruption_rate}")
        if len(self.length_range) != 2:
            raise DomainError("length_range must be (min, max)")
        lo, hi = self.length_range
        if lo < 1 or hi < lo:
            raise DomainError(f"length_range needs 1 <= min <= max, got {self.length_range}")
        if self.energy_law not in ENERGY_LAWS:
            raise DomainError(f"energy_law must be one of {ENERGY_LAWS}, got {self.energy_law!r}")

    def to_dict(self) -> Dict:
        raw = asdict(self)
        raw["length_range"] = list(self.length_range)
        return raw


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    label: int
    net_energy_kwh: float
    n_actions: int
    corrupted: bool
    fault: Optional[str] = None

    @property
    def student_id(self) -> str:
        return Path(self.file).stem


# ------------------------------------------------
# SAMPLING
# ------------------------------------------------


def category_weights(success: bool, elevation: float) -> np.ndarray:
    """Normalized category distribution; successes get elevated codes scaled by `elevation`"""
    weights = BASE_WEIGHTS.copy()
    if success:
        for code in ELEVATED_CODES:
            weights[code] *= 1.0 + ELEVATION_GAIN * elevation
    return weights / weights.sum()


def segment_elevations(signal: float, early_signal: float) -> Tuple[float, float]:
    """
    (early, late) elevation. Their length-weighted mean is always `signal`; early_signal=1
    puts all of it in the first EARLY_SHARE of actions.
    """
    early = signal * (1.0 + early_signal * (1.0 - EARLY_SHARE) / EARLY_SHARE)
    late = signal * (1.0 - early_signal)
    return early, late


def _draw_codes(rng: np.random.Generator, n: int, success: bool, config: GenConfig) -> List[int]:
    early, late = segment_elevations(config.signal, config.early_signal)
    n_early = min(n, math.ceil(round(EARLY_SHARE * (n + 1), 9)))
    codes = list(rng.choice(N_CATEGORIES, size=n_early, p=category_weights(success, early)))
    codes += list(rng.choice(N_CATEGORIES, size=n - n_early, p=category_weights(success, late)))
    return [int(c) for c in codes]


def _draw_energy(rng: np.random.Generator, success: bool) -> float:
    if success:
        return float(rng.uniform(*SUCCESS_RANGE))
    if rng.random() < OUTLIER_RATE:
        return float(rng.uniform(*OUTLIER_RANGE))
    sign = 1.0 if rng.random() < 0.5 else -1.0
    return sign * float(rng.uniform(*FAILURE_RANGE))


def _linear_energy(codes: List[int]) -> float:
    counts = np.bincount(np.asarray(codes, dtype=int), minlength=N_CATEGORIES)
    return float(LINEAR_INTERCEPT + sum(w * int(c) for w, c in zip(LINEAR_WEIGHTS, counts)))


def _build_document(
    rng: np.random.Generator, index: int, config: GenConfig
) -> Tuple[Dict, int, float, int]:
    success = bool(rng.random() < config.success_rate)
    length = int(rng.integers(config.length_range[0], config.length_range[1] + 1))
    codes = _draw_codes(rng, length - 1, success, config) + [ActionCategory.ANALYSIS.code]

    if config.energy_law == "linear":
        energy = _linear_energy(codes)
        label = int(-LINEAR_BAND <= energy <= LINEAR_BAND)
    else:
        energy = _draw_energy(rng, success)
        label = int(success)

    ts = START_TIME + timedelta(days=index % 7)
    events = []
    for position, code in enumerate(codes):
        ts += timedelta(milliseconds=int(rng.integers(2_000, 90_000)))
        final = position == len(codes) - 1
        names = VOCABULARY[ActionCategory(code)]
        event = {
            "ts": ts.isoformat(timespec="milliseconds"),
            "action": FINAL_ACTION if final else names[int(rng.integers(len(names)))],
        }
        if final:
            event["netEnergy"] = energy
        elif code == ActionCategory.ANALYSIS.code and rng.random() < INTERMEDIATE_ENERGY_RATE:
            event["netEnergy"] = round(float(rng.uniform(-100_000.0, 100_000.0)), 1)
        events.append(event)

    doc = {"student": f"student_{index:04d}", "events": events}
    return doc, label, energy, len(codes)


# ------------------------------------------------
# FAULTS
# ------------------------------------------------


def inject_fault(data: bytes, fault: str, rng: np.random.Generator) -> bytes:
    """Apply exactly one fault of the given kind"""
    if fault == "non_utf8":
        marker = b'"action": "'
        starts = [i for i in range(len(data)) if data.startswith(marker, i)]
        at = starts[int(rng.integers(len(starts)))] + len(marker) + 1
        return data[:at] + b"\xff" + data[at:]

    if fault == "deleted_comma":
        commas = [i for i, b in enumerate(data) if b == 0x2C]
        at = commas[int(rng.integers(len(commas)))]
        return data[:at] + data[at + 1 :]

    if fault == "truncation":
        cut = int(rng.integers(len(data) // 2, len(data) - 1))
        return data[:cut]

    raise DomainError(f"Unknown fault {fault!r}; expected one of {FAULTS}")


# ------------------------------------------------
# ENTRY POINTS
# ------------------------------------------------


def student_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) % SEED_MODULUS, index])


def generate_student(index: int, config: GenConfig) -> Tuple[str, bytes, ManifestEntry]:
    """(file name, file bytes, manifest entry) for one student"""
    rng = student_rng(config.seed, index)
    doc, label, energy, n_actions = _build_document(rng, index, config)
    data = (json.dumps(doc, indent=2) + "\n").encode("utf-8")

    fault = None
    if rng.random() < config.corruption_rate:
        fault = FAULTS[int(rng.integers(len(FAULTS)))]
        data = inject_fault(data, fault, rng)

    name = f"student_{index:04d}.json"
    entry = ManifestEntry(
        file=name,
        label=label,
        net_energy_kwh=energy,
        n_actions=n_actions,
        corrupted=fault is not None,
        fault=fault,
    )
    return name, data, entry


def generate(config: GenConfig, out_dir: PathLike, workers: int = 1) -> List[ManifestEntry]:
    """Write n_students session files to out_dir; manifest in student-index order"""
    out = Path(out_dir)

    def build(index: int) -> ManifestEntry:
        name, data, entry = generate_student(index, config)
        write_bytes(out / name, data)
        return entry

    manifest = ordered_map(build, list(range(config.n_students)), workers)
    corrupted = sum(1 for e in manifest if e.corrupted)
    positives = sum(e.label for e in manifest)
    logger.info(
        f"Generated {len(manifest)} session file(s) in {out}: {positives} success, "
        f"{corrupted} corrupted (seed {config.seed})"
    )
    return manifest
