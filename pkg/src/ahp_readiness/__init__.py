"""Group-AHP criteria weighting and national readiness scoring.

Pairwise judgment matrices on the 1-9 scale feed priority derivation
(eigenvector or row geometric mean), group aggregation with an entropy
consensus indicator, two-tier weight composition, and a characterization
scoring pipeline with exclusion renormalization.
"""

from .group import (
    CONSENSUS_THRESHOLD,
    ConsensusReport,
    ParticipantJudgments,
    aggregate_matrices,
    consensus_indicator,
)
from .hierarchy import (
    Category,
    CriteriaHierarchy,
    Criterion,
    GlobalWeightTable,
    compose_global_weights,
    rank_criteria,
    validate_hierarchy,
)
from .pairwise import (
    CR_THRESHOLD,
    RANDOM_INDEX,
    PairwiseMatrix,
    PriorityVector,
    SaatyJudgment,
    build_matrix,
    consistency_ratio,
    derive_priorities,
    derive_priorities_evm,
    derive_priorities_rgmm,
    most_inconsistent_triads,
)
from .scoring import (
    Assessment,
    AssessmentEntry,
    AssessmentResult,
    Characterization,
    category_achievement,
    characterization_score,
    evaluate,
    overall_index,
    renormalize_weights,
    sensitivity_one_at_a_time,
    validate_assessment,
    weighted_scores,
)
from .reporting import breakdown_chart_data, render_report
from .weighting import derive_weight_table

__version__ = "0.1.0"

__all__ = [
    "Assessment",
    "AssessmentEntry",
    "AssessmentResult",
    "CONSENSUS_THRESHOLD",
    "CR_THRESHOLD",
    "Category",
    "Characterization",
    "ConsensusReport",
    "CriteriaHierarchy",
    "Criterion",
    "GlobalWeightTable",
    "PairwiseMatrix",
    "ParticipantJudgments",
    "PriorityVector",
    "RANDOM_INDEX",
    "SaatyJudgment",
    "aggregate_matrices",
    "breakdown_chart_data",
    "build_matrix",
    "category_achievement",
    "characterization_score",
    "compose_global_weights",
    "consensus_indicator",
    "consistency_ratio",
    "derive_priorities",
    "derive_priorities_evm",
    "derive_priorities_rgmm",
    "derive_weight_table",
    "evaluate",
    "most_inconsistent_triads",
    "overall_index",
    "rank_criteria",
    "renormalize_weights",
    "render_report",
    "sensitivity_one_at_a_time",
    "validate_assessment",
    "validate_hierarchy",
    "weighted_scores",
]
