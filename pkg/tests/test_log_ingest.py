"""
tests/test_log_ingest.py
========================
Diagnosis, byte-level repair, session parsing and directory loading.

Tests cover:
  - diagnose() offsets and kinds for each fault class
  - repair() outcomes, idempotence and pass-through of clean input
  - randomly mutated documents: diagnose/parse agreement and repair fixpoints
  - parse_session() schema errors, timestamp handling, final-energy rule
  - scan / load / clean over directories with mixed file health
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from conftest import session_doc, write_json
from designtrace.errors import (
    DomainError,
    EmptyCohortError,
    SessionParseError,
    UnmappedActionError,
    UnrepairableCorpusError,
)
from designtrace.ingest import (
    DiagnosticKind,
    RepairOutcome,
    clean_directory,
    diagnose,
    is_well_formed,
    load_cohort,
    parse_session,
    repair,
    repair_report_frame,
    require_sessions,
    scan_directory,
    write_repair_report,
)
from designtrace.models import ActionCategory, Cohort


# ────────────────────────────────────────────────────────────────────────────
# diagnose
# ────────────────────────────────────────────────────────────────────────────

class TestDiagnose:
    def test_well_formed_has_no_diagnostics(self):
        assert diagnose(b'{"a": [1, 2, {"b": null}]}') == []

    def test_missing_brace_at_end(self):
        found = diagnose(b'{"a":1')
        assert [(d.kind, d.byte_offset) for d in found] == [(DiagnosticKind.MISSING_BRACE, 6)]

    def test_missing_bracket(self):
        found = diagnose(b'{"a":[1,2}')
        kinds = {d.kind for d in found}
        assert DiagnosticKind.UNKNOWN_TOKEN in kinds or DiagnosticKind.MISSING_BRACKET in kinds

    def test_missing_comma_between_values(self):
        found = diagnose(b"[1 2]")
        assert [(d.kind, d.byte_offset) for d in found] == [(DiagnosticKind.MISSING_COMMA, 3)]

    def test_non_utf8_byte(self):
        data = b'{"a":"x\xffy"}'
        found = diagnose(data)
        assert found[0].kind is DiagnosticKind.NON_UTF8_BYTE
        assert found[0].byte_offset == 7

    def test_unterminated_string_at_line_end(self):
        found = diagnose(b'{"a":"x\n}')
        assert found[0].kind is DiagnosticKind.MISSING_QUOTE
        assert found[0].byte_offset == 7

    def test_truncated_mid_value(self):
        found = diagnose(b'{"events":[{"ts":"2024')
        assert DiagnosticKind.TRUNCATED_DOCUMENT in {d.kind for d in found}

    def test_sorted_by_offset_with_excerpt(self):
        found = diagnose(b'[1 2 3')
        offsets = [d.byte_offset for d in found]
        assert offsets == sorted(offsets)
        assert all(d.excerpt for d in found)

    def test_nan_constant_is_not_well_formed(self):
        assert not is_well_formed(b'{"a": NaN}')
        assert diagnose(b'{"a": NaN}')


# ────────────────────────────────────────────────────────────────────────────
# repair
# ────────────────────────────────────────────────────────────────────────────

class TestRepair:
    def test_empty_is_skipped(self):
        data, log = repair(b"")
        assert data == b""
        assert log.outcome is RepairOutcome.SKIPPED_EMPTY
        assert not log.usable

    def test_clean_passes_through_byte_identical(self):
        raw = json.dumps(session_doc([3, 4], 100.0), indent=2).encode()
        data, log = repair(raw)
        assert data is raw or data == raw
        assert log.outcome is RepairOutcome.CLEAN_AS_IS
        assert log.applied == ()

    @pytest.mark.parametrize(
        "raw, expected",
        [
            (b'{"a":1', {"a": 1}),
            (b"[1 2]", [1, 2]),
            (b'{"a": 1 "b": 2}', {"a": 1, "b": 2}),
            (b'{"a":"x\xffy"}', {"a": "xy"}),
            (b'{"a":"x\n}', {"a": "x"}),
            (b'{"events":[{"ts":"2024', {"events": [{}]}),
            (b'{"events":[{"a":1},{"b":[true, fal', {"events": [{"a": 1}, {"b": [True]}]}),
        ],
    )
    def test_single_faults_repaired(self, raw, expected):
        data, log = repair(raw)
        assert log.outcome is RepairOutcome.REPAIRED
        assert json.loads(data) == expected
        assert log.applied
        assert log.found

    def test_comma_between_lines_inserted_after_previous_token(self):
        raw = b'{"events": [\n  {"a": 1}\n  {"b": 2}\n]}'
        data, log = repair(raw)
        assert log.outcome is RepairOutcome.REPAIRED
        assert json.loads(data) == {"events": [{"a": 1}, {"b": 2}]}
        assert b'{"a": 1},\n' in data

    def test_repair_is_idempotent(self):
        first, _ = repair(b'{"events":[{"action":"Add Wall" "ts":"x"}')
        second, log = repair(first)
        assert second == first
        assert log.outcome is RepairOutcome.CLEAN_AS_IS

    def test_unrepairable_keeps_residual(self):
        data, log = repair(b"hello world", file="junk.json")
        assert data == b"hello world"
        assert log.outcome is RepairOutcome.UNREPAIRABLE
        assert log.residual
        assert log.file == "junk.json"
        assert not log.usable

    def test_open_string_at_top_level_unrepairable(self):
        _, log = repair(b'"abc')
        assert log.outcome is RepairOutcome.UNREPAIRABLE


class TestMutatedDocuments:
    """Random byte edits of well-formed session files"""

    @staticmethod
    def _mutants(count: int, seed: int):
        rng = np.random.default_rng(seed)
        base = [
            json.dumps(session_doc([3, 6, 9, 11, 1], 512.5, student="a"), indent=2).encode(),
            json.dumps(session_doc([0, 12, 4], -20_000.0, student="b")).encode(),
            json.dumps(session_doc([2, 2, 7, 8, 5, 10], None, student="c"), indent=1).encode(),
        ]
        for _ in range(count):
            data = bytearray(base[int(rng.integers(len(base)))])
            for _ in range(int(rng.integers(1, 4))):
                op = int(rng.integers(3))
                at = int(rng.integers(len(data) + 1))
                if op == 0 and data:
                    del data[min(at, len(data) - 1)]
                elif op == 1:
                    data.insert(at, int(rng.integers(256)))
                else:
                    del data[at:]
            yield bytes(data)

    def test_diagnostics_empty_iff_well_formed(self):
        for data in self._mutants(300, seed=5):
            assert is_well_formed(data) == (diagnose(data) == []), data

    def test_repair_reaches_a_fixpoint(self):
        for data in self._mutants(300, seed=6):
            once, log = repair(data)
            twice, _ = repair(once)
            assert twice == once, data
            if log.outcome is RepairOutcome.REPAIRED:
                assert is_well_formed(once)
            if log.outcome is RepairOutcome.UNREPAIRABLE:
                assert once == data


# ────────────────────────────────────────────────────────────────────────────
# parse_session
# ────────────────────────────────────────────────────────────────────────────

def _bytes(doc) -> bytes:
    return json.dumps(doc).encode("utf-8")


class TestParseSession:
    def test_basic(self):
        session = parse_session(_bytes(session_doc([3, 6, 4], -1200.5)), "student_0001")
        assert session.student_id == "student_0001"
        assert [a.category for a in session.actions] == [
            ActionCategory.WALL,
            ActionCategory.SOLAR_PANEL,
            ActionCategory.WINDOW,
            ActionCategory.ANALYSIS,
        ]
        assert session.final_net_energy == -1200.5

    def test_last_analysis_energy_wins(self):
        doc = {
            "events": [
                {"ts": "2024-01-01T10:00:00Z", "action": "Run Energy Analysis", "netEnergy": 5000},
                {"ts": "2024-01-01T10:01:00Z", "action": "Add Wall", "netEnergy": 99},
                {"ts": "2024-01-01T10:02:00Z", "action": "Run Energy Analysis", "netEnergy": -300},
                {"ts": "2024-01-01T10:03:00Z", "action": "Show Heliodon"},
            ]
        }
        assert parse_session(_bytes(doc), "s").final_net_energy == -300.0

    def test_no_analysis_means_unlabeled(self):
        session = parse_session(_bytes(session_doc([3, 4])), "s")
        assert session.final_net_energy is None

    def test_sorted_by_timestamp_stable(self):
        doc = {
            "events": [
                {"ts": "2024-01-01T10:05:00Z", "action": "Add Roof"},
                {"ts": "2024-01-01T10:00:00+00:00", "action": "Add Wall"},
                {"ts": "2024-01-01T10:00:00Z", "action": "Add Door"},
            ]
        }
        session = parse_session(_bytes(doc), "s")
        assert [a.raw_name for a in session.actions] == ["Add Wall", "Add Door", "Add Roof"]

    def test_bad_timestamp_takes_previous(self):
        doc = {
            "events": [
                {"ts": "2024-01-01T10:00:00Z", "action": "Add Wall"},
                {"ts": "not a time", "action": "Add Door"},
            ]
        }
        session = parse_session(_bytes(doc), "s")
        assert session.actions[1].timestamp == session.actions[0].timestamp

    def test_event_without_action_skipped(self):
        doc = {"events": [{"ts": "2024-01-01T10:00:00Z"}, {"ts": "2024-01-01T10:00:01Z", "action": "Add Tree"}]}
        assert len(parse_session(_bytes(doc), "s")) == 1

    def test_missing_events(self):
        with pytest.raises(SessionParseError) as exc:
            parse_session(b'{"student": "x"}', "s")
        assert exc.value.path == "$.events"

    def test_event_not_object(self):
        with pytest.raises(SessionParseError) as exc:
            parse_session(b'{"events": [{"action": "Add Wall"}, 3]}', "s")
        assert exc.value.path == "$.events[1]"

    def test_top_level_not_object(self):
        with pytest.raises(SessionParseError):
            parse_session(b"[1, 2]", "s")

    def test_unmapped_action(self):
        with pytest.raises(UnmappedActionError) as exc:
            parse_session(b'{"events": [{"action": "Teleport"}]}', "s")
        assert exc.value.raw_name == "Teleport"


# ────────────────────────────────────────────────────────────────────────────
# Directory loading
# ────────────────────────────────────────────────────────────────────────────

@pytest.fixture
def mixed_dir(tmp_path: Path) -> Path:
    write_json(tmp_path, "a_good.json", session_doc([3, 4, 6], 100.0))
    (tmp_path / "b_empty.json").write_bytes(b"")
    broken = json.dumps(session_doc([3, 5], -50.0)).encode()
    (tmp_path / "c_truncated.json").write_bytes(broken[:-2])
    (tmp_path / "d_garbage.json").write_bytes(b"%%% not json %%%")
    (tmp_path / "e_schema.json").write_bytes(b"[1, 2, 3]")
    (tmp_path / "notes.txt").write_text("ignored")
    (tmp_path / "sub.json").mkdir()
    return tmp_path


class TestLoader:
    def test_scan_only_json_files_sorted(self, mixed_dir):
        names = [f.path.name for f in scan_directory(mixed_dir)]
        assert names == ["a_good.json", "b_empty.json", "c_truncated.json", "d_garbage.json", "e_schema.json"]

    def test_load_cohort_outcomes(self, mixed_dir):
        cohort, logs = load_cohort(mixed_dir)
        assert cohort.student_ids == ("a_good", "c_truncated")
        outcomes = {Path(log.file).name: log.outcome for log in logs}
        assert outcomes == {
            "a_good.json": RepairOutcome.CLEAN_AS_IS,
            "b_empty.json": RepairOutcome.SKIPPED_EMPTY,
            "c_truncated.json": RepairOutcome.REPAIRED,
            "d_garbage.json": RepairOutcome.UNREPAIRABLE,
            "e_schema.json": RepairOutcome.UNREPAIRABLE,
        }

    def test_schema_failure_carries_note(self, mixed_dir):
        _, logs = load_cohort(mixed_dir)
        schema = next(log for log in logs if log.file.endswith("e_schema.json"))
        assert "$" in schema.note

    def test_workers_do_not_change_result(self, mixed_dir):
        one, logs_one = load_cohort(mixed_dir, workers=1)
        many, logs_many = load_cohort(mixed_dir, workers=4)
        assert one.student_ids == many.student_ids
        assert [l.outcome for l in logs_one] == [l.outcome for l in logs_many]

    def test_clean_directory_writes_usable_files(self, mixed_dir, tmp_path_factory):
        out = tmp_path_factory.mktemp("clean")
        cohort, _ = clean_directory(mixed_dir, out)
        assert sorted(p.name for p in out.iterdir()) == ["a_good.json", "c_truncated.json"]
        assert (out / "a_good.json").read_bytes() == (mixed_dir / "a_good.json").read_bytes()
        assert is_well_formed((out / "c_truncated.json").read_bytes())
        assert len(cohort) == 2

    def test_clean_refuses_same_directory(self, mixed_dir):
        with pytest.raises(DomainError):
            clean_directory(mixed_dir, mixed_dir)

    def test_require_sessions(self, tmp_path):
        (tmp_path / "x.json").write_bytes(b"@@@")
        cohort, logs = load_cohort(tmp_path)
        with pytest.raises(UnrepairableCorpusError):
            require_sessions(cohort, logs)

        with pytest.raises(EmptyCohortError):
            require_sessions(Cohort(), [])

    def test_repair_report(self, mixed_dir, tmp_path_factory):
        _, logs = load_cohort(mixed_dir)
        frame = repair_report_frame(logs)
        assert list(frame.columns) == ["file", "outcome", "n_diagnostics", "first_diagnostic_kind", "first_offset"]
        good = frame[frame.file.str.endswith("a_good.json")].iloc[0]
        assert good.n_diagnostics == 0
        assert pd.isna(good.first_offset)

        path = tmp_path_factory.mktemp("report") / "repairs.csv"
        write_repair_report(logs, path)
        again = pd.read_csv(path)
        assert len(again) == 5
        assert set(again.outcome) == {"CleanAsIs", "SkippedEmpty", "Repaired", "Unrepairable"}
