# src/designtrace/ingest/session.py
"""
Session schema → SessionLog

    { "student": "<id>", "events": [ { "ts": "<ISO-8601>", "action": "<raw name>",
                                       "netEnergy": <number, optional> }, ... ] }
"""

from __future__ import annotations

import json
import logging
import math
from datetime import datetime, timezone
from typing import Any, List, Optional, Tuple

from ..errors import SessionParseError
from ..features.mapping import DEFAULT_MAPPING, CategoryMapping, categorize
from ..models import ActionCategory, DesignAction, SessionLog, to_utc

logger = logging.getLogger(__name__)

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def _parse_ts(raw: Any) -> Optional[datetime]:
    if not isinstance(raw, str):
        return None
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        return to_utc(datetime.fromisoformat(raw))
    except ValueError:
        return None


def _net_energy(raw: Any, path: str) -> Optional[float]:
    if raw is None:
        return None
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        logger.warning(f"{path}.netEnergy is not a number, ignoring: {raw!r}")
        return None
    if not math.isfinite(raw):
        logger.warning(f"{path}.netEnergy is not finite, ignoring")
        return None
    return float(raw)


def parse_session(
    data: bytes, student_id: str, mapping: CategoryMapping = DEFAULT_MAPPING
) -> SessionLog:
    """
    Build a SessionLog from (repaired) session bytes.

    Raises:
        SessionParseError: bytes are not JSON or do not match the schema
        UnmappedActionError: an action name matches no mapping rule
    """
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SessionParseError("$", f"not valid JSON: {e}") from e

    if not isinstance(doc, dict):
        raise SessionParseError("$", f"expected an object, got {type(doc).__name__}")
    events = doc.get("events")
    if not isinstance(events, list):
        raise SessionParseError("$.events", "missing or not an array")

    declared = doc.get("student")
    if declared is not None and declared != student_id:
        logger.debug(f"{student_id}: file declares student {declared!r}; using file name")

    records: List[Tuple[datetime, DesignAction, Optional[float]]] = []
    previous = EPOCH

    for i, event in enumerate(events):
        path = f"$.events[{i}]"
        if not isinstance(event, dict):
            raise SessionParseError(path, f"expected an object, got {type(event).__name__}")

        name = event.get("action")
        if not isinstance(name, str) or not name.strip():
            logger.warning(f"{student_id}: {path} has no action name, skipping")
            continue

        ts = _parse_ts(event.get("ts"))
        if ts is None:
            ts = previous
        previous = ts

        action = DesignAction(timestamp=ts, raw_name=name, category=categorize(name, mapping))
        records.append((ts, action, _net_energy(event.get("netEnergy"), path)))

    # sort is stable: equal timestamps keep file order
    records.sort(key=lambda r: r[0])

    final_energy = None
    for _, action, energy in records:
        if action.category is ActionCategory.ANALYSIS and energy is not None:
            final_energy = energy

    return SessionLog(
        student_id=student_id,
        actions=tuple(action for _, action, _ in records),
        final_net_energy=final_energy,
    )
