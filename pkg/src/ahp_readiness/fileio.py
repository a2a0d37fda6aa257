"""Loaders and writers for the JSON file formats.

Three document kinds: hierarchy files (categories with weighted criteria),
assessment files (per-criterion characterizations or exclusions), and
session files (participants' pairwise judgments for one hierarchy node).
Judgment values may be numbers, decimal strings ("0.2"), or fraction
strings ("1/5").

Shape problems raise FileFormatError; semantic problems (incomplete
matrices, invalid weights) surface as ValueError from the domain layer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .group import ParticipantJudgments
from .hierarchy import Category, CriteriaHierarchy, Criterion
from .pairwise import PairwiseMatrix, SaatyJudgment, build_matrix
from .scoring import Assessment, AssessmentEntry, Characterization


class FileFormatError(ValueError):
    """The file parsed as JSON but does not match the expected schema."""


def parse_ratio(raw) -> float:
    """Judgment value from a number, a decimal string, or "p/q"."""
    if isinstance(raw, bool):
        raise FileFormatError(f"not a judgment value: {raw!r}")
    if isinstance(raw, (int, float)):
        value = float(raw)
    elif isinstance(raw, str):
        text = raw.strip()
        try:
            if "/" in text:
                numerator, _, denominator = text.partition("/")
                value = float(numerator) / float(denominator)
            else:
                value = float(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FileFormatError(f"not a judgment value: {raw!r}") from exc
    else:
        raise FileFormatError(f"not a judgment value: {raw!r}")
    if not math.isfinite(value) or value <= 0:
        raise FileFormatError(f"judgment value must be positive and finite: {raw!r}")
    return value


def load_json(path: str | Path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def save_json(document: dict, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")


def _require(mapping: dict, key: str, context: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise FileFormatError(f"{context}: missing field '{key}'")
    return mapping[key]


def _number(raw, context: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise FileFormatError(f"{context}: expected a number, got {raw!r}")
    return float(raw)


def load_hierarchy(path: str | Path) -> CriteriaHierarchy:
    """Read a hierarchy file: {name, version, notes?, categories: [...]}.

    Each category is {id, name, weight, criteria: [{id, name, weight,
    source?}]}. Structural invariants are checked separately by
    validate_hierarchy, not here.
    """
    doc = load_json(path)
    categories = []
    for cat_doc in _require(doc, "categories", str(path)):
        cat_id = str(_require(cat_doc, "id", f"{path}: category"))
        criteria = tuple(
            Criterion(
                id=str(_require(c, "id", f"{path}: criterion in '{cat_id}'")),
                name=str(_require(c, "name", f"{path}: criterion in '{cat_id}'")),
                category_id=cat_id,
                local_weight=_number(_require(c, "weight", f"{path}: criterion in '{cat_id}'"),
                                     f"{path}: criterion weight in '{cat_id}'"),
                justification_source=str(c.get("source", "")),
            )
            for c in _require(cat_doc, "criteria", f"{path}: category '{cat_id}'")
        )
        categories.append(
            Category(
                id=cat_id,
                name=str(_require(cat_doc, "name", f"{path}: category '{cat_id}'")),
                local_weight=_number(_require(cat_doc, "weight", f"{path}: category '{cat_id}'"),
                                     f"{path}: category '{cat_id}' weight"),
                criteria=criteria,
            )
        )
    return CriteriaHierarchy(
        categories=tuple(categories),
        name=str(doc.get("name", "")),
        version=str(doc.get("version", "")),
        notes=str(doc.get("notes", "")),
    )


def load_assessment(path: str | Path) -> Assessment:
    """Read an assessment file: {subject, entries: [...]}.

    An entry is {criterion, characterization, justification?, evidence?}
    or {criterion, excluded: true, reason}.
    """
    doc = load_json(path)
    subject = str(_require(doc, "subject", str(path)))
    entries = []
    for entry_doc in _require(doc, "entries", str(path)):
        criterion_id = str(_require(entry_doc, "criterion", f"{path}: entry"))
        context = f"{path}: entry '{criterion_id}'"
        try:
            if entry_doc.get("excluded"):
                entries.append(
                    AssessmentEntry(
                        criterion_id=criterion_id,
                        excluded=True,
                        reason=str(entry_doc.get("reason", "")),
                    )
                )
            else:
                level = Characterization.from_label(
                    _require(entry_doc, "characterization", context)
                )
                entries.append(
                    AssessmentEntry(
                        criterion_id=criterion_id,
                        characterization=level,
                        justification=str(entry_doc.get("justification", "")),
                        evidence=str(entry_doc.get("evidence", "")),
                    )
                )
        except ValueError as exc:
            raise FileFormatError(f"{context}: {exc}") from exc
    return Assessment(subject=subject, entries=tuple(entries))


@dataclass(frozen=True)
class SessionFile:
    """Parsed session document: who judged what, for which hierarchy node."""

    items: tuple[str, ...]
    participants: tuple[ParticipantJudgments, ...]
    node: str | None = None
    method: str | None = None


def _parse_judgments(raw_judgments, context: str) -> list[SaatyJudgment]:
    judgments = []
    for j in raw_judgments:
        row = _require(j, "row", context)
        col = _require(j, "col", context)
        if isinstance(row, bool) or isinstance(col, bool) \
                or not isinstance(row, int) or not isinstance(col, int):
            raise FileFormatError(f"{context}: row/col must be integers")
        judgments.append(SaatyJudgment(row, col, parse_ratio(_require(j, "value", context))))
    return judgments


def load_session(path: str | Path) -> SessionFile:
    """Read a session file.

    The multi-participant form is {node?, items, participants: [{id,
    weight?, judgments}], method?}; a single-matrix file {items,
    judgments, method?} is accepted as a session with one anonymous
    participant.
    """
    doc = load_json(path)
    items = tuple(str(i) for i in _require(doc, "items", str(path)))
    method = doc.get("method")
    if method is not None and method not in ("evm", "rgmm"):
        raise FileFormatError(f"{path}: method must be 'evm' or 'rgmm', got {method!r}")
    node = doc.get("node")

    if "participants" in doc:
        participants = []
        for p_doc in doc["participants"]:
            pid = str(_require(p_doc, "id", f"{path}: participant"))
            weight = p_doc.get("weight")
            judgments = _parse_judgments(
                _require(p_doc, "judgments", f"{path}: participant '{pid}'"),
                f"{path}: participant '{pid}' judgment",
            )
            participants.append(
                ParticipantJudgments(
                    participant_id=pid,
                    matrix=build_matrix(items, judgments),
                    weight=None if weight is None else _number(weight, f"{path}: weight of '{pid}'"),
                )
            )
    elif "judgments" in doc:
        judgments = _parse_judgments(doc["judgments"], f"{path}: judgment")
        participants = [ParticipantJudgments("anonymous", build_matrix(items, judgments))]
    else:
        raise FileFormatError(f"{path}: needs either 'participants' or 'judgments'")

    if not participants:
        raise FileFormatError(f"{path}: participant list is empty")
    return SessionFile(
        items=items,
        participants=tuple(participants),
        node=None if node is None else str(node),
        method=method,
    )


def session_document(
    node: str,
    items: tuple[str, ...],
    participants: tuple[ParticipantJudgments, ...],
    method: str = "evm",
    result: dict | None = None,
) -> dict:
    """Serialize a session in the form load_session reads back."""
    doc = {
        "node": node,
        "items": list(items),
        "participants": [
            {
                "id": p.participant_id,
                **({"weight": p.weight} if p.weight is not None else {}),
                "judgments": [
                    {"row": j.row, "col": j.col, "value": j.value}
                    for j in p.matrix.judgments()
                ],
            }
            for p in participants
        ],
        "method": method,
    }
    if result is not None:
        doc["result"] = result
    return doc
