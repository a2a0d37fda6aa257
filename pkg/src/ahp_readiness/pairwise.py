"""Pairwise comparison matrices on the 1-9 scale.

A judgment matrix is positive and reciprocal: entry (i, j) holds how much
more important item i is than item j, entry (j, i) is forced to be the
reciprocal, and the diagonal is 1. Only the upper triangle is stored, so
reciprocity cannot be violated by construction.

Priorities are derived either by the eigenvector method (EVM, power
iteration on the matrix) or by the row geometric mean method (RGMM).
Both attach the usual consistency diagnostics: lambda_max, the
consistency index CI = (lambda_max - n) / (n - 1), and the consistency
ratio CR = CI / RI(n), gated at 10%.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

SAATY_MIN = 1.0 / 9.0
SAATY_MAX = 9.0
MIN_ITEMS = 2
MAX_ITEMS = 10

# Saaty's random consistency indices for matrix sizes 1..10.
RANDOM_INDEX = {
    1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12,
    6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49,
}

CR_THRESHOLD = 0.10

POWER_TOLERANCE = 1e-12
POWER_MAX_ITERATIONS = 10_000

_RANGE_SLACK = 1e-9


def saaty_scale() -> list[float]:
    """Every value an elicited judgment may take: integers 1..9 and their
    reciprocals."""
    return sorted({float(k) for k in range(1, 10)} | {1.0 / k for k in range(2, 10)})


def snap_to_scale(value: float, rel_tol: float = 1e-6) -> float | None:
    """Snap a parsed number onto the elicitation scale.

    Decimal serializations of reciprocals ("0.2", "0.333333") land back on
    the exact float for 1/5, 1/3, ... Returns None when the value is not
    within `rel_tol` of any scale value.
    """
    if not math.isfinite(value) or value <= 0:
        return None
    for scale_value in saaty_scale():
        if abs(value - scale_value) <= rel_tol * scale_value:
            return scale_value
    return None


def _check_range(value: float, where: str) -> None:
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{where}: judgment value must be a positive number, got {value!r}")
    if value < SAATY_MIN * (1 - _RANGE_SLACK) or value > SAATY_MAX * (1 + _RANGE_SLACK):
        raise ValueError(f"{where}: value {value} out of range [1/9, 9]")


@dataclass(frozen=True)
class SaatyJudgment:
    """One elicited comparison: how much more important item `row` is than
    item `col`. Indices are 1-based and must satisfy row < col."""

    row: int
    col: int
    value: float


class PairwiseMatrix:
    """Reciprocal comparison matrix over an ordered list of item ids.

    Construction validates size (2..10 items), completeness of the upper
    triangle, and the [1/9, 9] value range. The lower triangle and the
    unit diagonal are derived, never stored.
    """

    def __init__(self, item_ids: Sequence[str], upper: dict[tuple[int, int], float]):
        ids = tuple(str(i) for i in item_ids)
        n = len(ids)
        if not MIN_ITEMS <= n <= MAX_ITEMS:
            raise ValueError(f"matrix needs {MIN_ITEMS}..{MAX_ITEMS} items, got {n}")
        if len(set(ids)) != n:
            raise ValueError("item ids must be unique")
        expected = {(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
        missing = expected - set(upper)
        if missing:
            pair = min(missing)
            raise ValueError(f"missing pair ({pair[0]},{pair[1]})")
        extra = set(upper) - expected
        if extra:
            pair = min(extra)
            raise ValueError(f"pair ({pair[0]},{pair[1]}) is not in the upper triangle")
        for (i, j), v in upper.items():
            _check_range(v, f"pair ({i},{j})")
        self._ids = ids
        self._upper = {pair: float(upper[pair]) for pair in sorted(upper)}

    @property
    def item_ids(self) -> tuple[str, ...]:
        return self._ids

    @property
    def n(self) -> int:
        return len(self._ids)

    def entry(self, row: int, col: int) -> float:
        """Matrix entry with 1-based indices, reciprocal below the diagonal."""
        if not (1 <= row <= self.n and 1 <= col <= self.n):
            raise IndexError(f"indices ({row},{col}) out of range 1..{self.n}")
        if row == col:
            return 1.0
        if row < col:
            return self._upper[(row, col)]
        return 1.0 / self._upper[(col, row)]

    def judgments(self) -> tuple[SaatyJudgment, ...]:
        """Upper-triangle entries in canonical (row-major) order."""
        return tuple(SaatyJudgment(i, j, v) for (i, j), v in self._upper.items())

    def to_array(self) -> np.ndarray:
        a = np.ones((self.n, self.n))
        for (i, j), v in self._upper.items():
            a[i - 1, j - 1] = v
            a[j - 1, i - 1] = 1.0 / v
        return a

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairwiseMatrix):
            return NotImplemented
        return self._ids == other._ids and self._upper == other._upper

    def __hash__(self):
        return hash((self._ids, tuple(self._upper.items())))

    def __repr__(self) -> str:
        return f"PairwiseMatrix(items={list(self._ids)}, upper={self._upper})"

    @classmethod
    def from_array(cls, item_ids: Sequence[str], array, rel_tol: float = 1e-12) -> "PairwiseMatrix":
        """Build from a full n x n array, checking the reciprocal structure.

        The diagonal must be exactly 1 and entry(j,i)*entry(i,j) must be 1
        within `rel_tol`; only the upper triangle is kept.
        """
        a = np.asarray(array, dtype=float)
        n = len(tuple(item_ids))
        if a.shape != (n, n):
            raise ValueError(f"array shape {a.shape} does not match {n} items")
        for i in range(n):
            if a[i, i] != 1.0:
                raise ValueError(f"diagonal entry ({i + 1},{i + 1}) must be exactly 1, got {a[i, i]}")
        upper = {}
        for i in range(n):
            for j in range(i + 1, n):
                if abs(a[i, j] * a[j, i] - 1.0) > rel_tol:
                    raise ValueError(
                        f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not reciprocal"
                    )
                upper[(i + 1, j + 1)] = float(a[i, j])
        return cls(item_ids, upper)

    @classmethod
    def consistent(cls, item_ids: Sequence[str], weights: Sequence[float]) -> "PairwiseMatrix":
        """Perfectly consistent matrix with entries w_i / w_j.

        Weight ratios must stay inside [1/9, 9]; weights need not be
        normalized since only their ratios enter the matrix.
        """
        w = [float(x) for x in weights]
        if len(w) != len(tuple(item_ids)):
            raise ValueError("one weight per item required")
        if min(w) <= 0:
            raise ValueError("weights must be strictly positive")
        upper = {}
        for i in range(len(w)):
            for j in range(i + 1, len(w)):
                upper[(i + 1, j + 1)] = w[i] / w[j]
        return cls(item_ids, upper)


def build_matrix(items: int | Sequence[str], judgments: Iterable[SaatyJudgment]) -> PairwiseMatrix:
    """Assemble a complete reciprocal matrix from upper-triangle judgments.

    Exactly n(n-1)/2 judgments with 1 <= row < col <= n are required;
    duplicates, gaps, self-comparisons, and out-of-range values are errors.
    """
    ids = tuple(str(i) for i in range(1, items + 1)) if isinstance(items, int) else tuple(items)
    n = len(ids)
    upper: dict[tuple[int, int], float] = {}
    for judgment in judgments:
        row, col, value = judgment.row, judgment.col, judgment.value
        if row == col:
            raise ValueError(f"pair ({row},{col}): an item cannot be compared with itself")
        if not (1 <= row < col <= n):
            raise ValueError(f"pair ({row},{col}): expected 1 <= row < col <= {n}")
        if (row, col) in upper:
            raise ValueError(f"duplicate pair ({row},{col})")
        upper[(row, col)] = value
    return PairwiseMatrix(ids, upper)


@dataclass(frozen=True)
class PriorityVector:
    """Normalized priority weights plus consistency diagnostics.

    Tiny negative CI values caused by floating-point noise on consistent
    matrices are clamped to zero, so cr >= 0 always holds. For n <= 2 a
    reciprocal matrix is consistent by construction and cr = 0 by
    definition.
    """

    weights: tuple[float, ...]
    method: str
    lambda_max: float
    ci: float
    cr: float

    @property
    def acceptable(self) -> bool:
        return self.cr < CR_THRESHOLD


def _diagnostics(matrix: PairwiseMatrix, w: np.ndarray, method: str) -> PriorityVector:
    w = w / w.sum()
    a = matrix.to_array()
    n = matrix.n
    lambda_max = float(np.mean((a @ w) / w))
    if n <= 2:
        ci = cr = 0.0
    else:
        ci = max(0.0, (lambda_max - n) / (n - 1))
        cr = ci / RANDOM_INDEX[n]
    return PriorityVector(tuple(float(x) for x in w), method, lambda_max, ci, cr)


def derive_priorities_evm(matrix: PairwiseMatrix) -> PriorityVector:
    """Principal right eigenvector by power iteration.

    Starts from the uniform vector and iterates until the weight vector is
    stable to a relative 1e-12; a positive reciprocal matrix has a unique
    dominant eigenvalue, so failure to converge signals pathological input.
    """
    a = matrix.to_array()
    w = np.full(matrix.n, 1.0 / matrix.n)
    for _ in range(POWER_MAX_ITERATIONS):
        nxt = a @ w
        nxt /= nxt.sum()
        if float(np.max(np.abs(nxt - w) / w)) <= POWER_TOLERANCE:
            return _diagnostics(matrix, nxt, "evm")
        w = nxt
    raise ArithmeticError(
        f"power iteration did not converge within {POWER_MAX_ITERATIONS} iterations"
    )


def derive_priorities_rgmm(matrix: PairwiseMatrix) -> PriorityVector:
    """Row geometric mean priorities, with the same diagnostics as EVM."""
    a = matrix.to_array()
    means = np.exp(np.mean(np.log(a), axis=1))
    return _diagnostics(matrix, means, "rgmm")


def derive_priorities(matrix: PairwiseMatrix, method: str = "evm") -> PriorityVector:
    if method == "evm":
        return derive_priorities_evm(matrix)
    if method == "rgmm":
        return derive_priorities_rgmm(matrix)
    raise ValueError(f"unknown priority method {method!r} (expected 'evm' or 'rgmm')")


class ConsistencyCheck(NamedTuple):
    cr: float
    acceptable: bool


def consistency_ratio(matrix: PairwiseMatrix, method: str = "evm") -> ConsistencyCheck:
    """Consistency ratio and its verdict against the 10% gate."""
    vector = derive_priorities(matrix, method)
    return ConsistencyCheck(vector.cr, vector.cr < CR_THRESHOLD)


def most_inconsistent_triads(
    matrix: PairwiseMatrix, k: int = 3
) -> list[tuple[int, int, int, float]]:
    """Triads (i, j, l) ranked by |ln(a_ij * a_jl / a_il)|, worst first.

    A consistent matrix scores 0 on every triad. Indices are 1-based; ties
    break on index order, and at most k triads are returned (all of them
    when k exceeds the triad count). Matrices with n < 3 have no triads.
    """
    if matrix.n < 3:
        return []
    a = matrix.to_array()
    triads = []
    for i in range(matrix.n):
        for j in range(i + 1, matrix.n):
            for l in range(j + 1, matrix.n):
                score = abs(math.log(a[i, j] * a[j, l] / a[i, l]))
                triads.append((i + 1, j + 1, l + 1, score))
    triads.sort(key=lambda t: (-t[3], t[:3]))
    return triads[: max(0, k)]
