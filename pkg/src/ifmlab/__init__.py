"""Executable theory of intuitionistic fuzzy metric spaces.

Construct and audit spaces carrying degrees of nearness and non-nearness,
classify self-maps against sampled contraction notions, and compute fixed
points by Picard iteration with nearness-based stopping.
"""

from .operators import (
    NoWitnessError,
    OperatorPair,
    SeparationWitnesses,
    audit_operator_pair,
    check_idempotent,
    find_separation_witnesses,
    lukasiewicz,
    min_max,
    operator_pair,
    product_probsum,
    unit_scalar,
)
from .report import AuditReport, ClauseResult
from .spaces import (
    DEFAULT_PROBE_TS,
    AsymptoticReport,
    BallSpec,
    ClosednessReport,
    CoordinateSpace,
    Curve,
    FiniteTabulated,
    IfmSpace,
    JointContinuityReport,
    MembershipPair,
    SequenceReport,
    asymptotic_nearness_probe,
    axiom_audit,
    ball_contains,
    closedness_probe,
    evaluate,
    finite_tabulated,
    induced_from_metric,
    joint_continuity_probe,
    membership_grid,
    sequence_diagnostics,
    time_parameter,
)
from .contractions import (
    ContractivityReport,
    DomainEscapeError,
    SelfMap,
    closed_ball_hypotheses,
    contractive_sequence_check,
    direct_ratio_contractive_check,
    if_contractive_check,
    self_map_from_spec,
    t_uniform_continuity_probe,
)
from .solver import (
    IterationTrace,
    SolveConfig,
    SolveResult,
    UniquenessReport,
    closed_ball_solve,
    direct_ratio_solve,
    iterate_trace,
    picard_solve,
    power_map_solve,
    uniqueness_probe,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticReport",
    "AuditReport",
    "BallSpec",
    "ClauseResult",
    "ClosednessReport",
    "ContractivityReport",
    "CoordinateSpace",
    "Curve",
    "DEFAULT_PROBE_TS",
    "DomainEscapeError",
    "FiniteTabulated",
    "IfmSpace",
    "IterationTrace",
    "JointContinuityReport",
    "MembershipPair",
    "NoWitnessError",
    "OperatorPair",
    "SelfMap",
    "SeparationWitnesses",
    "SequenceReport",
    "SolveConfig",
    "SolveResult",
    "UniquenessReport",
    "asymptotic_nearness_probe",
    "audit_operator_pair",
    "axiom_audit",
    "ball_contains",
    "check_idempotent",
    "closed_ball_hypotheses",
    "closed_ball_solve",
    "closedness_probe",
    "contractive_sequence_check",
    "direct_ratio_contractive_check",
    "direct_ratio_solve",
    "evaluate",
    "find_separation_witnesses",
    "finite_tabulated",
    "if_contractive_check",
    "induced_from_metric",
    "iterate_trace",
    "joint_continuity_probe",
    "lukasiewicz",
    "membership_grid",
    "min_max",
    "operator_pair",
    "picard_solve",
    "power_map_solve",
    "product_probsum",
    "self_map_from_spec",
    "sequence_diagnostics",
    "t_uniform_continuity_probe",
    "time_parameter",
    "uniqueness_probe",
    "unit_scalar",
]
