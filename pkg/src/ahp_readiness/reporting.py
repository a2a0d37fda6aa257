"""Render assessment results as JSON (canonical) or markdown (derived).

Arithmetic stays at full precision everywhere; numbers are rounded only
here, at presentation time, with half-up rounding to the printed column
width. Rendering is pure: the timestamp is injectable, so identical
results produce byte-identical documents.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from decimal import ROUND_HALF_UP, Decimal

from .scoring import AssessmentResult

FORMATS = ("json", "markdown")


def round_half_up(value: float, places: int) -> float:
    return float(format_fixed(value, places))


def format_fixed(value: float, places: int) -> str:
    """Half-up decimal string with a fixed number of places, e.g. 0.03951."""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def _percent(value: float) -> str:
    return f"{format_fixed(value * 100.0, 1)}%"


def breakdown_chart_data(result: AssessmentResult) -> list[tuple[str, float]]:
    """Category achievements plus the overall index, as (label, fraction)
    pairs in category order — the data behind the readiness breakdown
    chart."""
    pairs = [(cat.name, cat.achievement) for cat in result.categories]
    pairs.append(("Overall", result.overall_index))
    return pairs


def report_document(result: AssessmentResult, generated_at: str | None = None) -> dict:
    """The canonical report structure; JSON and markdown both come from it."""
    if generated_at is None:
        generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return {
        "subject": result.subject,
        "generated_at": generated_at,
        "overall_index": result.overall_index,
        "categories": {cat.name: cat.achievement for cat in result.categories},
        "weights": [
            {
                "id": row.criterion_id,
                "category": row.category_id,
                "weight": row.aggregated_weight,
                "rank": row.rank,
            }
            for row in result.weight_table.rows
        ],
        "scores": [
            {
                "id": row.criterion_id,
                "category": row.category_id,
                "normalized_weight": row.normalized_weight,
                "score": row.score,
                "weighted_score": row.weighted_score,
                "excluded": row.excluded,
                **({"reason": row.reason} if row.excluded else {}),
            }
            for row in result.rows
        ],
        "sensitivity": [{"id": cid, "delta": delta} for cid, delta in result.sensitivity],
        "figure3": [[label, value] for label, value in breakdown_chart_data(result)],
    }


def _markdown(document: dict) -> str:
    lines = [f"# Readiness report: {document['subject']}", ""]
    lines.append(f"Generated at: {document['generated_at']}")
    lines.append("")

    lines.append("## Criteria weights")
    lines.append("")
    lines.append("| ID | Aggregated weight | Rank |")
    lines.append("| --- | --- | --- |")
    for row in document["weights"]:
        lines.append(f"| {row['id']} | {format_fixed(row['weight'], 3)} | {row['rank']} |")
    lines.append("")

    # categories and scores are both emitted in hierarchy order
    category_ids = _category_ids(document)
    for cat_id, (category_name, achievement) in zip(category_ids, document["categories"].items()):
        lines.append(f"## {category_name}")
        lines.append("")
        lines.append("| ID | Normalized weight | Score | Weighted score |")
        lines.append("| --- | --- | --- | --- |")
        excluded = []
        for score_row in document["scores"]:
            if score_row["category"] != cat_id:
                continue
            if score_row["excluded"]:
                excluded.append(score_row)
                continue
            lines.append(
                f"| {score_row['id']} | {format_fixed(score_row['normalized_weight'], 3)} "
                f"| {format_fixed(score_row['score'], 2)} "
                f"| {format_fixed(score_row['weighted_score'], 5)} |"
            )
        lines.append("")
        for score_row in excluded:
            lines.append(f"Excluded: {score_row['id']} ({score_row.get('reason', '')})")
        if excluded:
            lines.append("")
        lines.append(f"Category achievement: {_percent(achievement)} of maximum.")
        lines.append("")

    lines.append("## Overall readiness index")
    lines.append("")
    lines.append(f"{_percent(document['overall_index'])} ({format_fixed(document['overall_index'], 4)})")
    lines.append("")

    lines.append("## Sensitivity to one-level raises")
    lines.append("")
    if document["sensitivity"]:
        lines.append("| Criterion | Index delta |")
        lines.append("| --- | --- |")
        for entry in document["sensitivity"]:
            lines.append(f"| {entry['id']} | +{format_fixed(entry['delta'], 5)} |")
    else:
        lines.append("All included criteria are already at the top level.")
    lines.append("")
    return "\n".join(lines)


def _category_ids(document: dict) -> list[str]:
    ids: list[str] = []
    for row in document["scores"]:
        if row["category"] not in ids:
            ids.append(row["category"])
    return ids


def render_report(
    result: AssessmentResult, fmt: str = "json", generated_at: str | None = None
) -> str:
    """Serialize a result; fmt is "json" or "markdown"."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r} (expected one of {FORMATS})")
    document = report_document(result, generated_at)
    if fmt == "json":
        return json.dumps(document, indent=2) + "\n"
    return _markdown(document)
