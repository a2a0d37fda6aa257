"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with -s to see them). Tolerances are fixed here and
nowhere else."""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from ahp_readiness.fileio import SessionFile, load_assessment, load_hierarchy
from ahp_readiness.group import ParticipantJudgments, consensus_indicator
from ahp_readiness.hierarchy import compose_global_weights
from ahp_readiness.pairwise import (
    PairwiseMatrix,
    consistency_ratio,
    derive_priorities_evm,
    derive_priorities_rgmm,
)
from ahp_readiness.reporting import round_half_up
from ahp_readiness.scoring import (
    Assessment,
    AssessmentEntry,
    Characterization,
    evaluate,
    renormalize_weights,
)
from ahp_readiness.weighting import derive_weight_table

from conftest import GREECE_ASSESSMENT, GREECE_HIERARCHY, random_consistent_matrix
from test_scoring import (
    EXCLUDED,
    PRINTED_WEIGHTED_SCORES,
    _random_assessment,
    _random_hierarchy,
)
from test_weighting import normalized_composition, synthetic_sessions

# printed three-decimal aggregated weights and ranks of the Greece dataset
PRINTED_TABLE = {
    "PL1": (0.024, 18), "PL2": (0.013, 24), "PL3": (0.022, 20), "PL4": (0.046, 9),
    "PL5": (0.047, 8), "PL6": (0.054, 5), "PL7": (0.031, 14),
    "TI1": (0.056, 4), "TI2": (0.075, 3), "TI3": (0.035, 13), "TI4": (0.122, 1),
    "TI5": (0.082, 2), "TI6": (0.037, 11),
    "I1": (0.017, 21), "I2": (0.026, 17), "I3": (0.015, 23), "I4": (0.009, 27),
    "I5": (0.040, 10), "I6": (0.026, 16), "I7": (0.012, 25), "I8": (0.010, 26),
    "CA1": (0.024, 19), "CA2": (0.016, 22), "CA3": (0.050, 6), "CA4": (0.049, 7),
    "CA5": (0.027, 15), "CA6": (0.036, 12),
}
PRINTED_ACHIEVEMENTS = {"PL": 0.4272, "TI": 0.1183, "I": 0.5171, "CA": 0.4637}
PRINTED_OVERALL = 0.3224

CYCLIC = [[1, 9, 1 / 9], [1 / 9, 1, 9], [9, 1 / 9, 1]]


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[acceptance] {name}: FAIL")
        raise
    print(f"[acceptance] {name}: PASS")


def test_golden_weights():
    with criterion("golden weights"):
        started = time.perf_counter()
        hierarchy = load_hierarchy(GREECE_HIERARCHY)
        table = compose_global_weights(hierarchy)
        assert len(table.rows) == 27
        for row in table.rows:
            printed_weight, printed_rank = PRINTED_TABLE[row.criterion_id]
            assert abs(row.aggregated_weight - printed_weight) <= 0.0005, row.criterion_id
            assert row.rank == printed_rank, row.criterion_id
        assert table.row("I6").rank == 16 and table.row("I2").rank == 17
        assert time.perf_counter() - started < 1.0


def test_golden_weighted_scores():
    with criterion("golden weighted scores"):
        started = time.perf_counter()
        hierarchy = load_hierarchy(GREECE_HIERARCHY)
        assessment = load_assessment(GREECE_ASSESSMENT)
        result = evaluate(hierarchy, assessment)
        scores = {row.criterion_id: row.weighted_score for row in result.rows}
        for cid, printed in PRINTED_WEIGHTED_SCORES.items():
            assert abs(round_half_up(scores[cid], 5) - printed) <= 0.00001, cid
        for cid in EXCLUDED:
            assert scores[cid] == 0.0
        assert time.perf_counter() - started < 1.0


def test_golden_aggregates():
    with criterion("golden aggregates"):
        hierarchy = load_hierarchy(GREECE_HIERARCHY)
        assessment = load_assessment(GREECE_ASSESSMENT)
        result = evaluate(hierarchy, assessment)
        achieved = {cat.category_id: cat.achievement for cat in result.categories}
        for cat_id, printed in PRINTED_ACHIEVEMENTS.items():
            assert abs(achieved[cat_id] - printed) <= 0.0005, cat_id
        assert abs(result.overall_index - PRINTED_OVERALL) <= 0.0005


def test_consistency_engine_properties():
    with criterion("consistency engine properties"):
        rng = np.random.default_rng(2019)
        for _ in range(1000):
            n = int(rng.integers(2, 11))
            matrix, generator = random_consistent_matrix(rng, n)
            vector = derive_priorities_evm(matrix)
            assert np.max(np.abs(np.array(vector.weights) - generator)) < 1e-9
            assert abs(vector.lambda_max - n) < 1e-9
            assert vector.cr < 1e-9
        cyclic = PairwiseMatrix.from_array(["a", "b", "c"], CYCLIC)
        vector = derive_priorities_evm(cyclic)
        assert abs(vector.lambda_max - 10.111) <= 0.001
        assert not consistency_ratio(cyclic).acceptable


def test_renormalization_properties():
    with criterion("renormalization properties"):
        rng = np.random.default_rng(2020)
        levels = list(Characterization)
        for _ in range(1000):
            hierarchy = _random_hierarchy(rng)
            assessment = _random_assessment(rng, hierarchy)
            weights = renormalize_weights(hierarchy, assessment)
            for cat in hierarchy.categories:
                total = sum(weights[c.id] for c in cat.criteria)
                assert abs(total - cat.local_weight) < 1e-9

            # no exclusions: renormalized weights equal composed weights exactly
            full = Assessment("full", tuple(
                AssessmentEntry(e.criterion_id, e.characterization or Characterization.MODERATE)
                for e in assessment.entries
            ))
            table = compose_global_weights(hierarchy)
            for cid, weight in renormalize_weights(hierarchy, full).items():
                assert weight == table.weight(cid)

            # raising one sampled criterion a level never lowers the index
            raisable = [e for e in assessment.entries if not e.excluded
                        and e.characterization is not Characterization.VERY_HIGH]
            if raisable:
                target = raisable[int(rng.integers(len(raisable)))]
                bumped = Assessment("bumped", tuple(
                    AssessmentEntry(e.criterion_id,
                                    levels[levels.index(e.characterization) + 1])
                    if e is target else e
                    for e in assessment.entries
                ))
                before = evaluate(hierarchy, assessment).overall_index
                after = evaluate(hierarchy, bumped).overall_index
                assert after >= before - 1e-15


def test_consensus_properties():
    with criterion("consensus properties"):
        identical = consensus_indicator([(0.4, 0.35, 0.25)] * 5)
        assert identical.s_star == pytest.approx(1.0, abs=1e-9)

        worked = consensus_indicator([(0.9, 0.1), (0.1, 0.9)])
        assert abs(worked.s_star - 0.384) <= 0.001

        rng = np.random.default_rng(2021)
        for _ in range(200):
            count, n = int(rng.integers(2, 6)), int(rng.integers(2, 7))
            vectors = []
            for _ in range(count):
                v = rng.uniform(0.05, 1.0, size=n)
                vectors.append(tuple(v / v.sum()))
            order = rng.permutation(count)
            shuffled = [vectors[i] for i in order]
            assert consensus_indicator(shuffled).s_star == pytest.approx(
                consensus_indicator(vectors).s_star, abs=1e-12
            )


def test_round_trip():
    with criterion("round trip"):
        hierarchy = load_hierarchy(GREECE_HIERARCHY)
        sessions = synthetic_sessions(hierarchy, participants=5)
        # priority vectors sum to exactly 1, so the recovered composition is
        # the stored weights normalized per tier
        expected = normalized_composition(hierarchy)
        for method in ("evm", "rgmm"):
            derivation = derive_weight_table(hierarchy, sessions, method=method)
            for row in derivation.table.rows:
                assert abs(row.aggregated_weight - expected[row.criterion_id]) <= 1e-6, (
                    method, row.criterion_id,
                )
