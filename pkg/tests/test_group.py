import math

import numpy as np
import pytest

from ahp_readiness.group import (
    ConsensusReport,
    ParticipantJudgments,
    aggregate_matrices,
    consensus_indicator,
    interpret_consensus,
    resolve_participant_weights,
)
from ahp_readiness.pairwise import (
    PairwiseMatrix,
    SaatyJudgment,
    build_matrix,
    derive_priorities_evm,
)

from conftest import random_consistent_matrix, random_reciprocal_matrix

# Hand-computed entropy oracle for K=2, n=2, vectors (0.9,0.1)/(0.1,0.9):
#   alpha = -(0.9 ln 0.9 + 0.1 ln 0.1) = 0.3250829734
#   group = normalize(sqrt(0.9*0.1), sqrt(0.1*0.9)) = (0.5, 0.5)
#   gamma = ln 2, beta = 0.3680642072
#   s_star = (exp(-beta) - 1/2) / (1 - 1/2) = 0.3841454885
WORKED_ALPHA = 0.3250829734
WORKED_BETA = 0.3680642072
WORKED_S_STAR = 0.3841454885


def _matrix(value: float) -> PairwiseMatrix:
    return build_matrix(2, [SaatyJudgment(1, 2, value)])


class TestAggregation:
    def test_single_participant_is_identity(self):
        m = build_matrix(3, [SaatyJudgment(1, 2, 3), SaatyJudgment(1, 3, 5), SaatyJudgment(2, 3, 2)])
        assert aggregate_matrices([ParticipantJudgments("p1", m)]) == m

    def test_geometric_mean_of_two(self):
        agg = aggregate_matrices([
            ParticipantJudgments("p1", _matrix(2)),
            ParticipantJudgments("p2", _matrix(8)),
        ])
        assert agg.entry(1, 2) == pytest.approx(4.0, rel=1e-12)

    def test_identical_matrices_any_weights(self):
        m = build_matrix(3, [SaatyJudgment(1, 2, 7), SaatyJudgment(1, 3, 9), SaatyJudgment(2, 3, 3)])
        agg = aggregate_matrices([
            ParticipantJudgments("p1", m, 0.6),
            ParticipantJudgments("p2", m, 0.3),
            ParticipantJudgments("p3", m, 0.1),
        ])
        assert agg == m

    def test_mismatched_items_rejected(self):
        a = build_matrix(["x", "y"], [SaatyJudgment(1, 2, 2)])
        b = build_matrix(["x", "z"], [SaatyJudgment(1, 2, 2)])
        with pytest.raises(ValueError, match="different items"):
            aggregate_matrices([ParticipantJudgments("p1", a), ParticipantJudgments("p2", b)])

    def test_empty_participant_list_rejected(self):
        with pytest.raises(ValueError, match="at least one participant"):
            aggregate_matrices([])

    def test_result_stays_reciprocal_and_in_range(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            n = int(rng.integers(2, 11))
            members = [
                ParticipantJudgments(f"p{k}", random_reciprocal_matrix(rng, n))
                for k in range(int(rng.integers(1, 6)))
            ]
            agg = aggregate_matrices(members)
            array = agg.to_array()
            assert np.all(array >= 1 / 9 - 1e-9)
            assert np.all(array <= 9 + 1e-9)
            assert np.allclose(array * array.T, 1.0)

    def test_weight_resolution(self):
        m = _matrix(2)
        equal = resolve_participant_weights(
            [ParticipantJudgments("a", m), ParticipantJudgments("b", m)]
        )
        assert equal == (0.5, 0.5)
        with pytest.raises(ValueError, match="all or none"):
            resolve_participant_weights(
                [ParticipantJudgments("a", m, 0.5), ParticipantJudgments("b", m)]
            )
        with pytest.raises(ValueError, match="sum to 1"):
            resolve_participant_weights(
                [ParticipantJudgments("a", m, 0.8), ParticipantJudgments("b", m, 0.8)]
            )


class TestConsensus:
    def test_identical_vectors_reach_full_consensus(self):
        report = consensus_indicator([(0.5, 0.3, 0.2)] * 5)
        assert report.s_star == pytest.approx(1.0, abs=1e-9)
        assert report.beta_entropy == pytest.approx(0.0, abs=1e-12)
        assert report.interpretation == "acceptable"

    def test_worked_opposite_vectors(self):
        report = consensus_indicator([(0.9, 0.1), (0.1, 0.9)])
        assert report.alpha_entropy == pytest.approx(WORKED_ALPHA, abs=1e-9)
        assert report.gamma_entropy == pytest.approx(math.log(2), abs=1e-12)
        assert report.beta_entropy == pytest.approx(WORKED_BETA, abs=1e-9)
        assert report.s_star == pytest.approx(WORKED_S_STAR, abs=1e-9)
        assert report.interpretation == "low"

    def test_participant_permutation_invariance(self):
        vectors = [(0.6, 0.3, 0.1), (0.2, 0.5, 0.3), (0.4, 0.4, 0.2)]
        a = consensus_indicator(vectors)
        b = consensus_indicator(vectors[::-1])
        assert a.s_star == pytest.approx(b.s_star, abs=1e-12)
        assert a.beta_entropy == pytest.approx(b.beta_entropy, abs=1e-12)

    def test_criterion_relabeling_invariance(self):
        vectors = [(0.6, 0.3, 0.1), (0.2, 0.5, 0.3)]
        shuffled = [(0.1, 0.6, 0.3), (0.3, 0.2, 0.5)]
        assert consensus_indicator(vectors).s_star == pytest.approx(
            consensus_indicator(shuffled).s_star, abs=1e-12
        )

    def test_single_participant_notice(self):
        report = consensus_indicator([(0.7, 0.3)])
        assert report.s_star == 1.0
        assert report.notice is not None
        assert report.acceptable

    def test_accepts_priority_vectors(self):
        m = build_matrix(2, [SaatyJudgment(1, 2, 5)])
        v = derive_priorities_evm(m)
        report = consensus_indicator([v, v])
        assert report.s_star == pytest.approx(1.0, abs=1e-9)

    def test_zero_components_rejected(self):
        with pytest.raises(ValueError, match="strictly positive"):
            consensus_indicator([(1.0, 0.0), (0.5, 0.5)])

    def test_interpretation_bands(self):
        assert interpret_consensus(0.64) == "low"
        assert interpret_consensus(0.65) == "moderate"
        assert interpret_consensus(0.7499) == "moderate"
        assert interpret_consensus(0.75) == "acceptable"
        assert interpret_consensus(1.0) == "acceptable"

    def test_moving_to_group_mean_never_lowers_consensus(self):
        # empirical probe, not a theorem: swapping one participant's vector
        # for the group's geometric mean should not reduce agreement
        rng = np.random.default_rng(29)
        for _ in range(200):
            count, n = int(rng.integers(2, 6)), int(rng.integers(2, 7))
            vectors = []
            for _ in range(count):
                v = rng.uniform(0.05, 1.0, size=n)
                vectors.append(tuple(v / v.sum()))
            before = consensus_indicator(vectors)
            group = np.exp(np.mean(np.log(np.array(vectors)), axis=0))
            group /= group.sum()
            replaced = [tuple(group)] + vectors[1:]
            after = consensus_indicator(replaced)
            assert after.s_star >= before.s_star - 1e-9

    def test_report_acceptable_property(self):
        assert ConsensusReport(0.75, 0, 0, 0, "acceptable").acceptable
        assert not ConsensusReport(0.7, 0, 0, 0, "moderate").acceptable


class TestGroupRecovery:
    def test_consistent_panel_recovers_shared_weights(self):
        rng = np.random.default_rng(31)
        matrix, w = random_consistent_matrix(rng, 5)
        members = [ParticipantJudgments(f"p{k}", matrix) for k in range(5)]
        group = aggregate_matrices(members)
        v = derive_priorities_evm(group)
        assert np.array(v.weights) == pytest.approx(w, abs=1e-9)
        report = consensus_indicator([derive_priorities_evm(p.matrix) for p in members])
        assert report.s_star == pytest.approx(1.0, abs=1e-9)
