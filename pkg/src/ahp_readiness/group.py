"""Group aggregation of judgments and the entropy consensus indicator.

Individual judgment matrices are combined entry by entry with a weighted
geometric mean (aggregation of individual judgments), which keeps the
result reciprocal and inside the [1/9, 9] range.

Agreement between participants is measured on their priority vectors with
a Shannon-entropy construction: alpha is the weighted mean of individual
entropies, gamma the entropy of the normalized element-wise weighted
geometric mean of the vectors, and beta = gamma - alpha the entropy the
group adds over its members. The indicator

    s_star = (exp(-beta) - 1/B) / (1 - 1/B),   B = min(K, n)

is 1 for identical vectors and falls toward 0 as the vectors diverge;
75% is the customary acceptability line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pairwise import SAATY_MAX, SAATY_MIN, PairwiseMatrix, PriorityVector

CONSENSUS_THRESHOLD = 0.75
_WEIGHT_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ParticipantJudgments:
    """One participant's complete judgment matrix for a session.

    A weight of None means an equal share 1/K, resolved at aggregation
    time; explicit weights must be positive and sum to 1.
    """

    participant_id: str
    matrix: PairwiseMatrix
    weight: float | None = None


@dataclass(frozen=True)
class ConsensusReport:
    s_star: float
    alpha_entropy: float
    gamma_entropy: float
    beta_entropy: float
    interpretation: str
    notice: str | None = None

    @property
    def acceptable(self) -> bool:
        return self.s_star >= CONSENSUS_THRESHOLD


def interpret_consensus(s_star: float) -> str:
    if s_star < 0.65:
        return "low"
    if s_star < CONSENSUS_THRESHOLD:
        return "moderate"
    return "acceptable"


def resolve_participant_weights(participants: Sequence[ParticipantJudgments]) -> tuple[float, ...]:
    """Equal shares when no participant carries a weight; otherwise all
    weights must be explicit, positive, and sum to 1."""
    if not participants:
        raise ValueError("at least one participant required")
    explicit = [p.weight for p in participants if p.weight is not None]
    if not explicit:
        return tuple(1.0 / len(participants) for _ in participants)
    if len(explicit) != len(participants):
        raise ValueError("either all or none of the participants may carry a weight")
    if min(explicit) <= 0:
        raise ValueError("participant weights must be strictly positive")
    total = sum(explicit)
    if abs(total - 1.0) > _WEIGHT_SUM_TOLERANCE:
        raise ValueError(f"participant weights must sum to 1, got {total}")
    return tuple(float(w) for w in explicit)


def aggregate_matrices(participants: Sequence[ParticipantJudgments]) -> PairwiseMatrix:
    """Weighted geometric mean of the participants' matrices, entry-wise.

    All participants must judge the same items in the same order. When all
    participants agree on a pair the value is taken verbatim, so a group
    of identical matrices aggregates to exactly that matrix.
    """
    weights = resolve_participant_weights(participants)
    items = participants[0].matrix.item_ids
    for p in participants[1:]:
        if p.matrix.item_ids != items:
            raise ValueError(
                f"participant '{p.participant_id}' judges different items than "
                f"'{participants[0].participant_id}'"
            )
    upper: dict[tuple[int, int], float] = {}
    for judgment in participants[0].matrix.judgments():
        pair = (judgment.row, judgment.col)
        values = [p.matrix.entry(*pair) for p in participants]
        if all(v == values[0] for v in values):
            upper[pair] = values[0]
        else:
            combined = math.exp(sum(w * math.log(v) for w, v in zip(weights, values)))
            upper[pair] = min(max(combined, SAATY_MIN), SAATY_MAX)
    return PairwiseMatrix(items, upper)


def _shannon_entropy(p: np.ndarray) -> float:
    return float(-np.sum(p * np.log(p)))


def consensus_indicator(
    priorities: Sequence[PriorityVector | Sequence[float]],
    participant_weights: Sequence[float] | None = None,
) -> ConsensusReport:
    """Entropy-based agreement score over the participants' priority vectors.

    A single participant trivially agrees with itself: s_star is defined
    as 1 and the report carries a notice instead of a computed beta.
    """
    vectors = [np.asarray(getattr(p, "weights", p), dtype=float) for p in priorities]
    if not vectors:
        raise ValueError("at least one priority vector required")
    n = len(vectors[0])
    for v in vectors:
        if len(v) != n:
            raise ValueError("all priority vectors must have the same length")
        if v.min() <= 0:
            raise ValueError("priority vectors must be strictly positive")
    count = len(vectors)

    if participant_weights is None:
        weights = np.full(count, 1.0 / count)
    else:
        weights = np.asarray(participant_weights, dtype=float)
        if len(weights) != count:
            raise ValueError("one weight per participant required")
        if weights.min() <= 0:
            raise ValueError("participant weights must be strictly positive")
        if abs(float(weights.sum()) - 1.0) > _WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"participant weights must sum to 1, got {float(weights.sum())}")

    if count < 2:
        entropy = _shannon_entropy(vectors[0])
        return ConsensusReport(
            s_star=1.0,
            alpha_entropy=entropy,
            gamma_entropy=entropy,
            beta_entropy=0.0,
            interpretation=interpret_consensus(1.0),
            notice="single participant: consensus is 1 by definition",
        )

    alpha = float(sum(w * _shannon_entropy(v) for w, v in zip(weights, vectors)))
    log_group = sum(w * np.log(v) for w, v in zip(weights, vectors))
    group = np.exp(log_group)
    group /= group.sum()
    gamma = _shannon_entropy(group)
    beta = gamma - alpha
    ceiling = float(min(count, n))
    s_star = (math.exp(-beta) - 1.0 / ceiling) / (1.0 - 1.0 / ceiling)
    s_star = min(1.0, max(0.0, s_star))
    return ConsensusReport(
        s_star=s_star,
        alpha_entropy=alpha,
        gamma_entropy=gamma,
        beta_entropy=beta,
        interpretation=interpret_consensus(s_star),
    )
