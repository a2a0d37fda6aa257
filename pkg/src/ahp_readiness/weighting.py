"""Derive a full criteria weight table from per-node judgment sessions.

One session covers the category tier (the "root" node, items = category
ids) and one session covers each category (items = its criterion ids).
Each session is aggregated across participants, priorities are derived,
the consistency gate is applied, and the local weights are composed into
global weights through the hierarchy.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fileio import SessionFile
from .group import (
    ConsensusReport,
    aggregate_matrices,
    consensus_indicator,
    resolve_participant_weights,
)
from .hierarchy import (
    Category,
    CriteriaHierarchy,
    Criterion,
    GlobalWeightTable,
    compose_global_weights,
)
from .pairwise import CR_THRESHOLD, PairwiseMatrix, PriorityVector, derive_priorities

ROOT_NODE = "root"


class InconsistentSessionError(ValueError):
    """A session's aggregated matrix failed the 10% consistency gate."""

    def __init__(self, node: str, cr: float):
        super().__init__(
            f"session '{node}': consistency ratio {cr:.4f} is not under "
            f"{CR_THRESHOLD:.2f}; re-elicit or pass --allow-inconsistent"
        )
        self.node = node
        self.cr = cr


@dataclass(frozen=True)
class SessionResult:
    node: str
    items: tuple[str, ...]
    group_matrix: PairwiseMatrix
    priorities: PriorityVector
    participant_priorities: tuple[tuple[str, PriorityVector], ...]
    consensus: ConsensusReport


@dataclass(frozen=True)
class WeightDerivation:
    method: str
    sessions: tuple[SessionResult, ...]
    hierarchy: CriteriaHierarchy
    table: GlobalWeightTable


def resolve_node(hierarchy: CriteriaHierarchy, session: SessionFile) -> str:
    """Which hierarchy node a session belongs to.

    An explicit node field wins ("root", a category id, or a category
    name); otherwise the item set decides: category ids mean the root
    session, the criterion ids of one category mean that category.
    """
    if session.node is not None:
        if session.node == ROOT_NODE:
            return ROOT_NODE
        return hierarchy.category(session.node).id

    items = set(session.items)
    if items == {cat.id for cat in hierarchy.categories}:
        return ROOT_NODE
    for cat in hierarchy.categories:
        if items == {c.id for c in cat.criteria}:
            return cat.id
    raise ValueError(
        f"session items {sorted(items)} match neither the category tier nor "
        f"any single category of the hierarchy"
    )


def run_session(node: str, session: SessionFile, method: str) -> SessionResult:
    """Aggregate one session and attach per-participant diagnostics."""
    group_matrix = aggregate_matrices(session.participants)
    weights = resolve_participant_weights(session.participants)
    individual = tuple(
        (p.participant_id, derive_priorities(p.matrix, method))
        for p in session.participants
    )
    consensus = consensus_indicator([v for _, v in individual], weights)
    return SessionResult(
        node=node,
        items=session.items,
        group_matrix=group_matrix,
        priorities=derive_priorities(group_matrix, method),
        participant_priorities=individual,
        consensus=consensus,
    )


def derive_weight_table(
    hierarchy: CriteriaHierarchy,
    sessions: list[SessionFile],
    method: str = "evm",
    allow_inconsistent: bool = False,
) -> WeightDerivation:
    """Full pipeline: aggregate each session, derive priorities, gate on
    the consistency ratio, and compose the hierarchy's global weights.

    Requires exactly one session per node (root plus every category).
    Sessions whose aggregated matrix has cr >= 0.10 abort the derivation
    unless allow_inconsistent is set.
    """
    expected_items = {ROOT_NODE: {cat.id for cat in hierarchy.categories}}
    for cat in hierarchy.categories:
        expected_items[cat.id] = {c.id for c in cat.criteria}

    by_node: dict[str, SessionFile] = {}
    for session in sessions:
        node = resolve_node(hierarchy, session)
        if node in by_node:
            raise ValueError(f"duplicate session for node '{node}'")
        if set(session.items) != expected_items[node]:
            raise ValueError(
                f"session for node '{node}' judges items {sorted(session.items)}, "
                f"expected {sorted(expected_items[node])}"
            )
        by_node[node] = session

    required = [ROOT_NODE] + [cat.id for cat in hierarchy.categories]
    missing = [node for node in required if node not in by_node]
    if missing:
        raise ValueError(f"missing sessions for: {', '.join(missing)}")

    results = []
    for node in required:
        result = run_session(node, by_node[node], method)
        if not result.priorities.acceptable and not allow_inconsistent:
            raise InconsistentSessionError(node, result.priorities.cr)
        results.append(result)

    root = results[0]
    category_weight = dict(zip(root.items, root.priorities.weights))
    categories = []
    for cat, result in zip(hierarchy.categories, results[1:]):
        local = dict(zip(result.items, result.priorities.weights))
        categories.append(
            Category(
                id=cat.id,
                name=cat.name,
                local_weight=category_weight[cat.id],
                criteria=tuple(
                    Criterion(
                        id=criterion.id,
                        name=criterion.name,
                        category_id=cat.id,
                        local_weight=local[criterion.id],
                        justification_source=criterion.justification_source,
                    )
                    for criterion in cat.criteria
                ),
            )
        )
    derived = CriteriaHierarchy(
        categories=tuple(categories),
        name=hierarchy.name,
        version=hierarchy.version,
        notes="weights derived from judgment sessions",
    )
    return WeightDerivation(
        method=method,
        sessions=tuple(results),
        hierarchy=derived,
        table=compose_global_weights(derived),
    )


def derivation_document(derivation: WeightDerivation) -> dict:
    """JSON form of a weight derivation, session diagnostics included."""
    return {
        "method": derivation.method,
        "sessions": [
            {
                "node": s.node,
                "items": list(s.items),
                "group_weights": {
                    item: weight for item, weight in zip(s.items, s.priorities.weights)
                },
                "lambda_max": s.priorities.lambda_max,
                "cr": s.priorities.cr,
                "acceptable": s.priorities.acceptable,
                "participants": [
                    {"id": pid, "cr": vector.cr, "acceptable": vector.acceptable}
                    for pid, vector in s.participant_priorities
                ],
                "consensus": {
                    "s_star": s.consensus.s_star,
                    "interpretation": s.consensus.interpretation,
                    "acceptable": s.consensus.acceptable,
                    **({"notice": s.consensus.notice} if s.consensus.notice else {}),
                },
            }
            for s in derivation.sessions
        ],
        "criteria": [
            {
                "id": row.criterion_id,
                "category": row.category_id,
                "aggregated_weight": row.aggregated_weight,
                "rank": row.rank,
            }
            for row in derivation.table.rows
        ],
    }
