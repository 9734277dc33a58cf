"""
conftest.py: designtrace test configuration
===========================================

CLI options:

  --run-slow          Include slow tests (acceptance checks, full-size cohorts)
  --cohort-seed       Seed for the shared synthetic cohorts (default: 42)

Markers:
  slow         (skipped unless --run-slow)
  acceptance   end-to-end acceptance checks on synthetic cohorts

Usage examples
--------------
# fast suite
pytest tests/

# everything, including the acceptance checks
pytest tests/ --run-slow

# acceptance checks only
pytest tests/ -m acceptance --run-slow
"""

from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pytest

from designtrace.ingest import load_cohort
from designtrace.models import ActionCategory, Cohort, DesignAction, SessionLog
from designtrace.synth import GenConfig, generate

T0 = datetime(2024, 3, 1, 12, 0, tzinfo=timezone.utc)

# one raw name per category code, all mapped by the default mapping
RAW_NAMES = {
    0: "Add Door",
    1: "Add Floor",
    2: "Add Foundation",
    3: "Add Wall",
    4: "Add Window",
    5: "Add Roof",
    6: "Add Solar Panel",
    7: "Add Tree",
    8: "Add Building",
    9: "Run Energy Analysis",
    10: "Set Latitude",
    11: "Set U-Value",
    12: "Change Color",
}


# ────────────────────────────────────────────────────────────────────────────
# CLI options
# ────────────────────────────────────────────────────────────────────────────

def pytest_addoption(parser: pytest.Parser) -> None:
    grp = parser.getgroup("designtrace", "designtrace test options")

    grp.addoption("--run-slow",    action="store_true", help="Include slow tests")
    grp.addoption("--cohort-seed", type=int, default=42, help="Seed for shared synthetic cohorts")


# ────────────────────────────────────────────────────────────────────────────
# Helpers used by tests
# ────────────────────────────────────────────────────────────────────────────

def make_session(
    student_id: str, codes: Sequence[int], energy: Optional[float] = None
) -> SessionLog:
    """SessionLog with one action per code, one second apart."""
    actions = [
        DesignAction(
            timestamp=T0 + timedelta(seconds=i),
            raw_name=RAW_NAMES[c],
            category=ActionCategory(c),
        )
        for i, c in enumerate(codes)
    ]
    return SessionLog(student_id=student_id, actions=tuple(actions), final_net_energy=energy)


def session_doc(codes: Sequence[int], energy: Optional[float] = None, student: str = "s") -> Dict[str, Any]:
    """Session-schema document; the last event carries netEnergy when given."""
    events: List[Dict[str, Any]] = []
    for i, c in enumerate(codes):
        events.append({"ts": (T0 + timedelta(seconds=i)).isoformat(), "action": RAW_NAMES[c]})
    if energy is not None:
        events.append(
            {
                "ts": (T0 + timedelta(seconds=len(codes))).isoformat(),
                "action": "Run Energy Analysis",
                "netEnergy": energy,
            }
        )
    return {"student": student, "events": events}


def write_json(directory: Path, name: str, doc: Any) -> Path:
    path = directory / name
    path.write_bytes(json.dumps(doc, indent=2).encode("utf-8"))
    return path


# ────────────────────────────────────────────────────────────────────────────
# Fixtures
# ────────────────────────────────────────────────────────────────────────────

@pytest.fixture(scope="session")
def cohort_seed(request: pytest.FixtureRequest) -> int:
    return request.config.getoption("--cohort-seed")


@pytest.fixture(scope="session")
def small_cohort_dir(tmp_path_factory: pytest.TempPathFactory, cohort_seed: int) -> Path:
    """40 clean synthetic students with short sessions."""
    out = tmp_path_factory.mktemp("small_cohort")
    generate(GenConfig(n_students=40, length_range=(20, 60), seed=cohort_seed), out)
    return out


@pytest.fixture(scope="session")
def small_cohort(small_cohort_dir: Path) -> Cohort:
    cohort, _ = load_cohort(small_cohort_dir)
    return cohort


@pytest.fixture
def toy_sessions() -> List[SessionLog]:
    """Twelve hand-built sessions: walls and solar panels separate the classes."""
    sessions = []
    for i in range(12):
        success = i % 2 == 0
        codes = [3, 6, 6, 9, 11] if success else [3, 3, 3, 4, 0]
        codes = codes + [i % 13] * (i % 3)
        energy = 500.0 * i if success else 40_000.0 + i
        sessions.append(make_session(f"student_{i:02d}", codes, energy))
    return sessions


# ────────────────────────────────────────────────────────────────────────────
# Mark slow tests
# ────────────────────────────────────────────────────────────────────────────

def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow:          Slow tests (excluded by default; pass --run-slow)")
    config.addinivalue_line("markers", "acceptance:    End-to-end acceptance checks")


def pytest_collection_modifyitems(
    config: pytest.Config, items: list[pytest.Item]
) -> None:
    if not config.getoption("--run-slow", default=False):
        skip_slow = pytest.mark.skip(reason="pass --run-slow to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
