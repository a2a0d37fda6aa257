"""Two-tier criteria hierarchy: categories with local weights, each holding
criteria with local weights. A criterion's global (aggregated) weight is
the product of the two local weights, and criteria are ranked by the
full-precision aggregated weight, descending.

Printed weight tables are commonly rounded to three decimals, so tier sums
are allowed to miss 1 by up to 0.01.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

TIER_SUM_TOLERANCE = 0.01

_ID_PATTERN = re.compile(r"^[A-Za-z]+[0-9]+$")


@dataclass(frozen=True)
class Criterion:
    id: str
    name: str
    category_id: str
    local_weight: float
    justification_source: str = ""


@dataclass(frozen=True)
class Category:
    id: str
    name: str
    local_weight: float
    criteria: tuple[Criterion, ...]


@dataclass(frozen=True)
class CriteriaHierarchy:
    categories: tuple[Category, ...]
    name: str = ""
    version: str = ""
    notes: str = ""

    @cached_property
    def criteria(self) -> tuple[Criterion, ...]:
        return tuple(c for cat in self.categories for c in cat.criteria)

    @cached_property
    def criterion_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.criteria)

    def category(self, key: str) -> Category:
        """Look a category up by id or by name."""
        for cat in self.categories:
            if cat.id == key or cat.name == key:
                return cat
        raise KeyError(f"unknown category {key!r}")


def validate_hierarchy(hierarchy: CriteriaHierarchy) -> list[str]:
    """Check every structural invariant; returns one message per violation.

    An empty list means the hierarchy is sound. Violations are data, not
    exceptions: each message names the offending node and the broken rule.
    """
    violations: list[str] = []
    seen_categories: set[str] = set()
    seen_criteria: set[str] = set()

    if not hierarchy.categories:
        return ["hierarchy: contains no categories"]

    for cat in hierarchy.categories:
        if not cat.id:
            violations.append("category with empty id")
        elif cat.id in seen_categories:
            violations.append(f"category '{cat.id}': duplicate id")
        seen_categories.add(cat.id)

        if not 0 < cat.local_weight <= 1:
            violations.append(
                f"category '{cat.id}': local weight {cat.local_weight} outside (0, 1]"
            )
        if len(cat.criteria) < 2:
            violations.append(
                f"category '{cat.id}': needs at least 2 criteria, has {len(cat.criteria)}"
            )

        for criterion in cat.criteria:
            if not _ID_PATTERN.match(criterion.id):
                violations.append(
                    f"criterion '{criterion.id}': id must be letters followed by digits"
                )
            if criterion.id in seen_criteria:
                violations.append(f"criterion '{criterion.id}': duplicate id")
            seen_criteria.add(criterion.id)
            if criterion.category_id != cat.id:
                violations.append(
                    f"criterion '{criterion.id}': category_id '{criterion.category_id}' "
                    f"does not match owning category '{cat.id}'"
                )
            if not 0 < criterion.local_weight <= 1:
                violations.append(
                    f"criterion '{criterion.id}': local weight {criterion.local_weight} "
                    f"outside (0, 1]"
                )

        child_sum = sum(c.local_weight for c in cat.criteria)
        if cat.criteria and abs(child_sum - 1.0) > TIER_SUM_TOLERANCE:
            violations.append(
                f"category '{cat.id}': criterion weights sum to {child_sum:.3f}, "
                f"must be within {TIER_SUM_TOLERANCE} of 1"
            )

    category_sum = sum(cat.local_weight for cat in hierarchy.categories)
    if abs(category_sum - 1.0) > TIER_SUM_TOLERANCE:
        violations.append(
            f"hierarchy: category weights sum to {category_sum:.3f}, "
            f"must be within {TIER_SUM_TOLERANCE} of 1"
        )
    return violations


@dataclass(frozen=True)
class GlobalWeightRow:
    criterion_id: str
    category_id: str
    aggregated_weight: float
    rank: int


@dataclass(frozen=True)
class GlobalWeightTable:
    """Aggregated weight and rank per criterion, in hierarchy order."""

    rows: tuple[GlobalWeightRow, ...]

    @cached_property
    def _by_id(self) -> dict[str, GlobalWeightRow]:
        return {row.criterion_id: row for row in self.rows}

    def row(self, criterion_id: str) -> GlobalWeightRow:
        return self._by_id[criterion_id]

    def weight(self, criterion_id: str) -> float:
        return self._by_id[criterion_id].aggregated_weight

    def by_rank(self) -> list[GlobalWeightRow]:
        return sorted(self.rows, key=lambda row: row.rank)

    def top(self, k: int) -> list[str]:
        return [row.criterion_id for row in self.by_rank()[:k]]

    def bottom(self, k: int) -> list[str]:
        """The k weakest criteria, weakest first."""
        return [row.criterion_id for row in self.by_rank()[::-1][:k]]


def compose_global_weights(hierarchy: CriteriaHierarchy) -> GlobalWeightTable:
    """Multiply each criterion's local weight by its category's weight and
    rank the products.

    Ranks are assigned on the full-precision products (not on any printed
    rounding), descending, with lexicographic criterion id as the final
    tie-break. Rejects invalid hierarchies, naming the first violation.
    """
    violations = validate_hierarchy(hierarchy)
    if violations:
        raise ValueError(f"invalid hierarchy: {violations[0]}")
    products = {
        criterion.id: cat.local_weight * criterion.local_weight
        for cat in hierarchy.categories
        for criterion in cat.criteria
    }
    order = sorted(products, key=lambda cid: (-products[cid], cid))
    rank = {cid: position for position, cid in enumerate(order, start=1)}
    rows = tuple(
        GlobalWeightRow(criterion.id, cat.id, products[criterion.id], rank[criterion.id])
        for cat in hierarchy.categories
        for criterion in cat.criteria
    )
    return GlobalWeightTable(rows)


def rank_criteria(table: GlobalWeightTable) -> list[tuple[str, int]]:
    """(criterion id, rank) pairs from strongest to weakest."""
    if not table.rows:
        raise ValueError("weight table is empty")
    return [(row.criterion_id, row.rank) for row in table.by_rank()]
