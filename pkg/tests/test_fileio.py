import json

import pytest

from ahp_readiness.fileio import (
    FileFormatError,
    load_assessment,
    load_hierarchy,
    load_session,
    parse_ratio,
    save_json,
    session_document,
)
from ahp_readiness.group import ParticipantJudgments
from ahp_readiness.pairwise import PairwiseMatrix
from ahp_readiness.scoring import Characterization


class TestParseRatio:
    def test_numbers_pass_through(self):
        assert parse_ratio(3) == 3.0
        assert parse_ratio(0.2) == 0.2

    def test_fraction_strings(self):
        assert parse_ratio("1/5") == 0.2
        assert parse_ratio("1/3") == pytest.approx(1 / 3, abs=1e-15)

    def test_decimal_strings(self):
        assert parse_ratio("0.2") == 0.2
        assert parse_ratio("7") == 7.0

    def test_rejects_garbage(self):
        for bad in ("abc", "1/0", "-3", 0, True, None, [2]):
            with pytest.raises(FileFormatError):
                parse_ratio(bad)


class TestHierarchyFile:
    def test_greece_loads(self, greece_hierarchy):
        assert greece_hierarchy.name
        assert greece_hierarchy.version == "2019"
        assert [cat.id for cat in greece_hierarchy.categories] == ["PL", "TI", "I", "CA"]
        assert greece_hierarchy.category("PL").criteria[0].justification_source

    def test_missing_field(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(json.dumps({"name": "x", "categories": [{"id": "A"}]}))
        with pytest.raises(FileFormatError, match="missing field"):
            load_hierarchy(path)

    def test_non_numeric_weight(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(json.dumps({"categories": [
            {"id": "A", "name": "A", "weight": "heavy", "criteria": []}
        ]}))
        with pytest.raises(FileFormatError, match="expected a number"):
            load_hierarchy(path)


class TestAssessmentFile:
    def test_greece_loads(self, greece_assessment):
        assert greece_assessment.subject == "Greece"
        assert len(greece_assessment.entries) == 27
        assert greece_assessment.by_id["PL4"].characterization is Characterization.HIGH
        assert greece_assessment.by_id["PL7"].excluded

    def test_exclusion_without_reason(self, tmp_path):
        path = tmp_path / "a.json"
        path.write_text(json.dumps({"subject": "X", "entries": [
            {"criterion": "A1", "excluded": True}
        ]}))
        with pytest.raises(FileFormatError, match="requires a reason"):
            load_assessment(path)

    def test_unknown_characterization(self, tmp_path):
        path = tmp_path / "a.json"
        path.write_text(json.dumps({"subject": "X", "entries": [
            {"criterion": "A1", "characterization": "meh"}
        ]}))
        with pytest.raises(FileFormatError, match="unknown characterization"):
            load_assessment(path)


class TestSessionFile:
    def test_multi_participant_round_trip(self, tmp_path):
        matrix = PairwiseMatrix.consistent(["a", "b", "c"], [4, 2, 1])
        participants = (
            ParticipantJudgments("p1", matrix, 0.5),
            ParticipantJudgments("p2", matrix, 0.5),
        )
        doc = session_document("root", ("a", "b", "c"), participants, method="rgmm")
        path = tmp_path / "session.json"
        save_json(doc, path)
        loaded = load_session(path)
        assert loaded.node == "root"
        assert loaded.method == "rgmm"
        assert loaded.items == ("a", "b", "c")
        assert [p.participant_id for p in loaded.participants] == ["p1", "p2"]
        assert loaded.participants[0].matrix == matrix
        assert loaded.participants[0].weight == 0.5

    def test_single_matrix_shape(self, tmp_path):
        path = tmp_path / "judgments.json"
        path.write_text(json.dumps({
            "items": ["a", "b"],
            "judgments": [{"row": 1, "col": 2, "value": "1/5"}],
            "method": "evm",
        }))
        loaded = load_session(path)
        assert len(loaded.participants) == 1
        assert loaded.participants[0].matrix.entry(1, 2) == 0.2

    def test_fraction_and_decimal_values_agree(self, tmp_path):
        for raw in ("1/5", "0.2", 0.2):
            path = tmp_path / "s.json"
            path.write_text(json.dumps({
                "items": ["a", "b"],
                "judgments": [{"row": 1, "col": 2, "value": raw}],
            }))
            assert load_session(path).participants[0].matrix.entry(1, 2) == 0.2

    def test_incomplete_judgments_are_domain_errors(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({
            "items": ["a", "b", "c"],
            "judgments": [{"row": 1, "col": 2, "value": 2}],
        }))
        with pytest.raises(ValueError, match=r"missing pair \(1,3\)"):
            load_session(path)

    def test_needs_participants_or_judgments(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"items": ["a", "b"]}))
        with pytest.raises(FileFormatError, match="participants"):
            load_session(path)

    def test_bad_method_rejected(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({
            "items": ["a", "b"],
            "judgments": [{"row": 1, "col": 2, "value": 2}],
            "method": "magic",
        }))
        with pytest.raises(FileFormatError, match="method"):
            load_session(path)
