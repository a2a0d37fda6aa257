"""Characterization scoring with exclusion renormalization.

Each criterion of an assessment subject is characterized on a five-level
scale (very low .. very high, scored 0 .. 1 in quarter steps) or excluded
for lack of evidence. Within a category, the weights of excluded criteria
are redistributed over the remaining ones so the category keeps its full
global weight; a category with no exclusions keeps its composed weights
untouched. The overall readiness index is the sum of all weighted scores,
equivalently the category-weighted sum of category achievements.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Sequence

from .hierarchy import (
    CriteriaHierarchy,
    GlobalWeightTable,
    compose_global_weights,
)

LEVEL_STEP = 0.25


class Characterization(Enum):
    VERY_LOW = 0.0
    LOW = 0.25
    MODERATE = 0.50
    HIGH = 0.75
    VERY_HIGH = 1.00

    @property
    def label(self) -> str:
        return self.name.replace("_", " ").lower()

    @classmethod
    def from_label(cls, text: str) -> "Characterization":
        key = " ".join(str(text).strip().lower().replace("_", " ").replace("-", " ").split())
        for member in cls:
            if member.label == key:
                return member
        raise ValueError(f"unknown characterization {text!r}")


def characterization_score(characterization: Characterization) -> float:
    """Fixed level-to-score mapping: 0, 0.25, 0.50, 0.75, 1.00."""
    return characterization.value


@dataclass(frozen=True)
class AssessmentEntry:
    """Either a characterization (with optional justification/evidence text)
    or an exclusion carrying the reason no score could be assigned."""

    criterion_id: str
    characterization: Characterization | None = None
    excluded: bool = False
    reason: str = ""
    justification: str = ""
    evidence: str = ""

    def __post_init__(self):
        if self.excluded:
            if self.characterization is not None:
                raise ValueError(
                    f"entry '{self.criterion_id}': excluded entries cannot carry a characterization"
                )
            if not self.reason.strip():
                raise ValueError(f"entry '{self.criterion_id}': exclusion requires a reason")
        elif self.characterization is None:
            raise ValueError(
                f"entry '{self.criterion_id}': needs a characterization unless excluded"
            )


@dataclass(frozen=True)
class Assessment:
    subject: str
    entries: tuple[AssessmentEntry, ...]

    @cached_property
    def by_id(self) -> dict[str, AssessmentEntry]:
        return {entry.criterion_id: entry for entry in self.entries}


def validate_assessment(hierarchy: CriteriaHierarchy, assessment: Assessment) -> list[str]:
    """Coverage check: every hierarchy criterion exactly once, nothing extra."""
    violations = []
    ids = [entry.criterion_id for entry in assessment.entries]
    duplicates = sorted({cid for cid in ids if ids.count(cid) > 1})
    if duplicates:
        violations.append(f"duplicate entries for: {', '.join(duplicates)}")
    missing = [cid for cid in hierarchy.criterion_ids if cid not in assessment.by_id]
    if missing:
        violations.append(f"missing entries for: {', '.join(missing)}")
    unknown = sorted(set(ids) - set(hierarchy.criterion_ids))
    if unknown:
        violations.append(f"entries for unknown criteria: {', '.join(unknown)}")
    return violations


def _checked(hierarchy: CriteriaHierarchy, assessment: Assessment) -> dict[str, AssessmentEntry]:
    violations = validate_assessment(hierarchy, assessment)
    if violations:
        raise ValueError(f"assessment does not match hierarchy: {violations[0]}")
    return assessment.by_id


def renormalize_weights(
    hierarchy: CriteriaHierarchy, assessment: Assessment
) -> dict[str, float]:
    """Per-criterion weights after redistributing the excluded criteria.

    In a category with exclusions, each included criterion gets
    local / (sum of included locals) * category weight, so the category's
    total weight is conserved. A category without exclusions keeps the
    composed products exactly. Excluded criteria get weight 0.
    """
    entries = _checked(hierarchy, assessment)
    weights: dict[str, float] = {}
    for cat in hierarchy.categories:
        included = [c for c in cat.criteria if not entries[c.id].excluded]
        if not included:
            raise ValueError(f"category '{cat.id}': all criteria are excluded")
        if len(included) == len(cat.criteria):
            for criterion in cat.criteria:
                weights[criterion.id] = cat.local_weight * criterion.local_weight
        else:
            included_sum = sum(c.local_weight for c in included)
            for criterion in cat.criteria:
                if entries[criterion.id].excluded:
                    weights[criterion.id] = 0.0
                else:
                    weights[criterion.id] = (
                        criterion.local_weight / included_sum * cat.local_weight
                    )
    return weights


def weighted_scores(hierarchy: CriteriaHierarchy, assessment: Assessment) -> dict[str, float]:
    """Renormalized weight times characterization score, per criterion."""
    entries = _checked(hierarchy, assessment)
    weights = renormalize_weights(hierarchy, assessment)
    scores: dict[str, float] = {}
    for cid, weight in weights.items():
        entry = entries[cid]
        scores[cid] = 0.0 if entry.excluded else weight * entry.characterization.value
    return scores


def category_achievement(
    hierarchy: CriteriaHierarchy, assessment: Assessment, category: str
) -> float:
    """Fraction of the category's maximum score achieved (0 to 1)."""
    cat = hierarchy.category(category)
    scores = weighted_scores(hierarchy, assessment)
    return sum(scores[c.id] for c in cat.criteria) / cat.local_weight


def overall_index(hierarchy: CriteriaHierarchy, assessment: Assessment) -> float:
    """The readiness index: the plain sum of all weighted scores."""
    return sum(weighted_scores(hierarchy, assessment).values())


def sensitivity_one_at_a_time(
    hierarchy: CriteriaHierarchy, assessment: Assessment
) -> list[tuple[str, float]]:
    """Index gain from raising each criterion one characterization level.

    Only included criteria below "very high" appear; the gain is the
    renormalized weight times the 0.25 level step. Sorted by descending
    gain, ties broken by criterion id.
    """
    entries = _checked(hierarchy, assessment)
    weights = renormalize_weights(hierarchy, assessment)
    deltas = [
        (cid, weights[cid] * LEVEL_STEP)
        for cid in weights
        if not entries[cid].excluded
        and entries[cid].characterization is not Characterization.VERY_HIGH
    ]
    deltas.sort(key=lambda pair: (-pair[1], pair[0]))
    return deltas


@dataclass(frozen=True)
class CriterionScore:
    criterion_id: str
    category_id: str
    normalized_weight: float
    excluded: bool
    characterization: Characterization | None
    weighted_score: float
    reason: str = ""

    @property
    def score(self) -> float | None:
        return None if self.excluded else self.characterization.value


@dataclass(frozen=True)
class CategoryAchievement:
    category_id: str
    name: str
    weight: float
    achievement: float


@dataclass(frozen=True)
class AssessmentResult:
    subject: str
    rows: tuple[CriterionScore, ...]
    categories: tuple[CategoryAchievement, ...]
    overall_index: float
    sensitivity: tuple[tuple[str, float], ...]
    weight_table: GlobalWeightTable

    def category_achievements(self) -> dict[str, float]:
        return {cat.name: cat.achievement for cat in self.categories}


def evaluate(hierarchy: CriteriaHierarchy, assessment: Assessment) -> AssessmentResult:
    """Run the full pipeline and collect everything a report needs."""
    entries = _checked(hierarchy, assessment)
    table = compose_global_weights(hierarchy)
    weights = renormalize_weights(hierarchy, assessment)
    scores = weighted_scores(hierarchy, assessment)

    rows = tuple(
        CriterionScore(
            criterion_id=criterion.id,
            category_id=cat.id,
            normalized_weight=weights[criterion.id],
            excluded=entries[criterion.id].excluded,
            characterization=entries[criterion.id].characterization,
            weighted_score=scores[criterion.id],
            reason=entries[criterion.id].reason,
        )
        for cat in hierarchy.categories
        for criterion in cat.criteria
    )
    categories = tuple(
        CategoryAchievement(
            category_id=cat.id,
            name=cat.name,
            weight=cat.local_weight,
            achievement=sum(scores[c.id] for c in cat.criteria) / cat.local_weight,
        )
        for cat in hierarchy.categories
    )
    return AssessmentResult(
        subject=assessment.subject,
        rows=rows,
        categories=categories,
        overall_index=sum(scores.values()),
        sensitivity=tuple(sensitivity_one_at_a_time(hierarchy, assessment)),
        weight_table=table,
    )
