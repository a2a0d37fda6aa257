import math
from pathlib import Path

import numpy as np
import pytest

from ahp_readiness.fileio import load_assessment, load_hierarchy
from ahp_readiness.pairwise import PairwiseMatrix

DATASETS = Path(__file__).resolve().parents[1] / "datasets"
GREECE_HIERARCHY = DATASETS / "greece-2019.json"
GREECE_ASSESSMENT = DATASETS / "greece-assessment-2019.json"


@pytest.fixture(scope="session")
def greece_hierarchy():
    return load_hierarchy(GREECE_HIERARCHY)


@pytest.fixture(scope="session")
def greece_assessment():
    return load_assessment(GREECE_ASSESSMENT)


def random_positive_weights(rng: np.random.Generator, n: int) -> np.ndarray:
    """Strictly positive weights whose pairwise ratios stay inside [1/9, 9],
    so they can seed a consistent judgment matrix."""
    spread = rng.uniform(0.0, 0.999 * math.log(9.0), size=n)
    w = np.exp(spread - spread.min())
    return w / w.sum()


def random_consistent_matrix(rng: np.random.Generator, n: int) -> tuple[PairwiseMatrix, np.ndarray]:
    w = random_positive_weights(rng, n)
    ids = [f"c{i + 1}" for i in range(n)]
    return PairwiseMatrix.consistent(ids, w), w


def random_reciprocal_matrix(rng: np.random.Generator, n: int) -> PairwiseMatrix:
    """Random elicitation-style matrix: each upper entry drawn from the
    1..9 scale or its reciprocals."""
    from ahp_readiness.pairwise import saaty_scale

    scale = saaty_scale()
    upper = {
        (i, j): float(rng.choice(scale))
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    }
    return PairwiseMatrix([f"c{i + 1}" for i in range(n)], upper)
