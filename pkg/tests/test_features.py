"""
tests/test_features.py
======================
Category mapping, tally / sequence encodings, padding, standardization and features.csv.
"""

from __future__ import annotations

import json

import numpy as np
import pytest

from conftest import make_session
from designtrace.errors import DataError, DomainError, MappingConfigError, UnmappedActionError
from designtrace.features import (
    DEFAULT_MAPPING,
    CategoryMapping,
    CodeSequence,
    CountVector,
    FeatureMatrix,
    apply_standardizer,
    categorize,
    encode_sequence,
    feature_matrix,
    fit_pad_length,
    fit_standardizer,
    load_mapping,
    pad_matrix,
    prefix,
    read_features_csv,
    sequence_matrix,
    tally,
    tally_matrix,
    unstandardize,
    write_features_csv,
)
from designtrace.models import PAD_CODE, ActionCategory, FeatureKind


# ────────────────────────────────────────────────────────────────────────────
# Mapping
# ────────────────────────────────────────────────────────────────────────────

class TestMapping:
    @pytest.mark.parametrize(
        "name, category",
        [
            ("Add Wall", ActionCategory.WALL),
            ("ROTATE SOLAR PANEL", ActionCategory.SOLAR_PANEL),
            ("Run Energy Analysis", ActionCategory.ANALYSIS),
            ("Show Heliodon", ActionCategory.ANALYSIS),
            ("Set U-Value", ActionCategory.THERMAL),
            ("Change Location", ActionCategory.PARAMETERS),
            ("Edit Color", ActionCategory.COLOR),
        ],
    )
    def test_default_rules(self, name, category):
        assert categorize(name, DEFAULT_MAPPING) is category

    def test_first_rule_wins(self):
        # "door" precedes "window" in the default rule order
        assert DEFAULT_MAPPING.categorize("Door-Window Frame") is ActionCategory.DOOR

    def test_unmapped(self):
        with pytest.raises(UnmappedActionError):
            DEFAULT_MAPPING.categorize("Undo")

    @pytest.mark.parametrize("name", ["Set Date", "Date Picker", "Set Time", "time of day"])
    def test_date_and_time_match_word_starts(self, name):
        assert DEFAULT_MAPPING.categorize(name) is ActionCategory.PARAMETERS

    @pytest.mark.parametrize("name", ["Update Design", "Validate Model", "Show Runtime"])
    def test_date_and_time_not_matched_inside_words(self, name):
        with pytest.raises(UnmappedActionError):
            DEFAULT_MAPPING.categorize(name)

    def test_blank_keyword_rejected(self):
        raw = DEFAULT_MAPPING.to_dict()
        raw["rules"].insert(0, {"keyword": " ", "code": 0})
        with pytest.raises(MappingConfigError):
            CategoryMapping.from_dict(raw)

    def test_default_covers_every_category(self):
        assert {r.category for r in DEFAULT_MAPPING.rules} == set(ActionCategory)

    def test_dict_round_trip(self):
        again = CategoryMapping.from_dict(DEFAULT_MAPPING.to_dict())
        assert again == DEFAULT_MAPPING

    def test_missing_category_rejected(self):
        raw = DEFAULT_MAPPING.to_dict()
        raw["rules"] = [r for r in raw["rules"] if r["code"] != 12]
        with pytest.raises(MappingConfigError):
            CategoryMapping.from_dict(raw)

    @pytest.mark.parametrize(
        "raw",
        [
            [],
            {"rules": [{"keyword": "wall", "code": 3}]},
            {"version": "x", "rules": []},
            {"version": "x", "rules": [{"keyword": "wall", "code": 13}]},
            {"version": "x", "rules": [{"keyword": 5, "code": 3}]},
        ],
    )
    def test_malformed_config_rejected(self, raw):
        with pytest.raises(MappingConfigError):
            CategoryMapping.from_dict(raw)

    def test_load_mapping_file(self, tmp_path):
        raw = DEFAULT_MAPPING.to_dict()
        raw["version"] = "site-2"
        raw["rules"].insert(0, {"keyword": "pv array", "code": 6})
        path = tmp_path / "mapping.json"
        path.write_text(json.dumps(raw))
        mapping = load_mapping(path)
        assert mapping.version == "site-2"
        assert mapping.categorize("Place PV Array") is ActionCategory.SOLAR_PANEL

    def test_load_mapping_not_json(self, tmp_path):
        path = tmp_path / "mapping.json"
        path.write_text("{nope")
        with pytest.raises(MappingConfigError):
            load_mapping(path)


# ────────────────────────────────────────────────────────────────────────────
# Encodings
# ────────────────────────────────────────────────────────────────────────────

class TestEncode:
    def test_tally_counts_sum_to_length(self):
        session = make_session("s", [3, 3, 6, 9, 12, 3])
        counts = tally(session)
        assert counts[3] == 3
        assert counts[6] == 1
        assert counts.total == len(session)

    def test_tally_empty_session(self):
        assert tally(make_session("s", [])).counts == (0,) * 13

    def test_count_vector_validation(self):
        with pytest.raises(DomainError):
            CountVector((1, 2))

    def test_sequence_preserves_order(self):
        assert encode_sequence(make_session("s", [5, 1, 9])).codes == (5, 1, 9)

    def test_code_sequence_rejects_pad_code(self):
        with pytest.raises(DomainError):
            CodeSequence((PAD_CODE,))

    @pytest.mark.parametrize(
        "n, fraction, expected",
        [(10, 0.3, 3), (10, 0.25, 3), (7, 0.1, 1), (10, 1.0, 10), (0, 0.5, 0), (3, 0.5, 2)],
    )
    def test_prefix_length_is_ceiling(self, n, fraction, expected):
        seq = CodeSequence(tuple(i % 13 for i in range(n)))
        assert len(prefix(seq, fraction)) == expected

    @pytest.mark.parametrize("fraction", [0.0, -0.1, 1.5, float("nan")])
    def test_prefix_fraction_domain(self, fraction):
        with pytest.raises(DomainError):
            prefix(CodeSequence((1, 2)), fraction)


class TestPadding:
    def test_pad_to_longest(self):
        seqs = [CodeSequence((1, 2, 3)), CodeSequence((4,))]
        m = pad_matrix(seqs, ["a", "b"])
        assert m.pad_length == 3
        np.testing.assert_array_equal(m.values, [[1, 2, 3], [4, PAD_CODE, PAD_CODE]])

    def test_fixed_width_truncates(self):
        m = pad_matrix([CodeSequence((1, 2, 3, 4))], ["a"], pad_length=2)
        np.testing.assert_array_equal(m.values, [[1, 2]])

    def test_all_empty_sequences_get_one_pad_column(self):
        m = pad_matrix([CodeSequence(()), CodeSequence(())], ["a", "b"])
        assert m.values.shape == (2, 1)
        assert fit_pad_length([CodeSequence(())]) == 1

    def test_empty_input_rejected(self):
        with pytest.raises(DomainError):
            pad_matrix([], [])

    def test_ids_must_match(self):
        with pytest.raises(DomainError):
            pad_matrix([CodeSequence((1,))], ["a", "b"])

    def test_matrix_is_read_only(self):
        m = tally_matrix([make_session("s", [1])])
        with pytest.raises(ValueError):
            m.values[0, 0] = 5

    def test_sequence_matrix_prefix(self):
        sessions = [make_session("a", list(range(10))), make_session("b", [2, 2])]
        m = sequence_matrix(sessions, fraction=0.5)
        assert m.pad_length == 5
        np.testing.assert_array_equal(m.values[1], [2, PAD_CODE, PAD_CODE, PAD_CODE, PAD_CODE])

    def test_feature_matrix_dispatch(self):
        sessions = [make_session("a", [1, 2])]
        assert feature_matrix(sessions, FeatureKind.TALLY).n_features == 13
        assert feature_matrix(sessions, FeatureKind.SEQUENCE).n_features == 2

    def test_take_preserves_metadata(self):
        m = pad_matrix([CodeSequence((1,)), CodeSequence((2, 3))], ["a", "b"])
        sub = m.take([1])
        assert sub.row_ids == ("b",)
        assert sub.pad_length == 2 and sub.pad_code == PAD_CODE

    def test_tally_width_enforced(self):
        with pytest.raises(DomainError):
            FeatureMatrix(np.zeros((2, 3)), ("a", "b"), FeatureKind.TALLY)


# ────────────────────────────────────────────────────────────────────────────
# Standardization
# ────────────────────────────────────────────────────────────────────────────

class TestStandardize:
    def _matrix(self):
        values = np.array([[1.0, 5.0], [3.0, 5.0], [5.0, 5.0]])
        return FeatureMatrix(values, ("a", "b", "c"), FeatureKind.SEQUENCE, pad_code=13, pad_length=2)

    def test_zero_mean_unit_variance(self):
        m = self._matrix()
        stats = fit_standardizer(m)
        z = apply_standardizer(m, stats)
        np.testing.assert_allclose(z.values[:, 0].mean(), 0.0, atol=1e-12)
        np.testing.assert_allclose(z.values[:, 0].std(), 1.0)

    def test_constant_column_gets_unit_stddev(self):
        stats = fit_standardizer(self._matrix())
        assert stats.stddevs[1] == 1.0
        np.testing.assert_array_equal(apply_standardizer(self._matrix(), stats).values[:, 1], 0.0)

    def test_unstandardize_inverts(self):
        m = self._matrix()
        stats = fit_standardizer(m)
        np.testing.assert_allclose(unstandardize(apply_standardizer(m, stats), stats).values, m.values)

    def test_needs_two_rows(self):
        with pytest.raises(DomainError):
            fit_standardizer(self._matrix().take([0]))

    def test_width_mismatch(self):
        stats = fit_standardizer(self._matrix())
        with pytest.raises(DomainError):
            apply_standardizer(tally_matrix([make_session("s", [1])]), stats)


# ────────────────────────────────────────────────────────────────────────────
# features.csv
# ────────────────────────────────────────────────────────────────────────────

class TestFeaturesCsv:
    def test_write_and_read(self, tmp_path):
        sessions = [make_session("a", [1, 1, 3], 1234.5), make_session("b", [6])]
        m = tally_matrix(sessions)
        path = write_features_csv(m, [s.final_net_energy for s in sessions], tmp_path / "f.csv")

        header = path.read_text().splitlines()[0]
        assert header == "student_id," + ",".join(f"f{j}" for j in range(13)) + ",final_net_energy"

        again, energies = read_features_csv(path)
        assert again.row_ids == ("a", "b")
        np.testing.assert_array_equal(again.values, m.values)
        assert energies[0] == 1234.5
        assert np.isnan(energies[1])

    def test_sequence_kind(self, tmp_path):
        m = pad_matrix([CodeSequence((1, 2)), CodeSequence((4,))], ["a", "b"])
        path = write_features_csv(m, [1.0, 2.0], tmp_path / "seq.csv")
        again, _ = read_features_csv(path, FeatureKind.SEQUENCE)
        assert again.pad_length == 2
        assert again.pad_code == PAD_CODE

    def test_tally_kind_on_sequence_file_is_data_error(self, tmp_path):
        m = pad_matrix([CodeSequence((1, 2))], ["a"])
        path = write_features_csv(m, [1.0], tmp_path / "seq.csv")
        with pytest.raises(DataError):
            read_features_csv(path, FeatureKind.TALLY)

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\n")
        with pytest.raises(DataError):
            read_features_csv(path)
