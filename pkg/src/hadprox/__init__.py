"""Inexact proximal point methods for variational inequalities on Hadamard
manifolds: geometry oracles, monotone field abstractions with enlargements,
absolute- and relative-error outer loops with per-iteration certificates,
and application drivers for optimization, equilibrium and KKT systems.
"""

from .manifold import (
    Euclidean,
    GeometryError,
    Hyperboloid,
    ManifoldOracle,
    ManifoldPoint,
    ProductManifold,
    SymmetricPositiveDefinite,
    TangentVector,
    oracle_from_id,
    point_from_payload,
    point_payload,
    product_manifold,
    tangent_from_payload,
    tangent_payload,
)
from .fields import (
    AssumptionError,
    ConvexFunctionOracle,
    FeasibilityError,
    FeasibleSet,
    FieldElement,
    FieldOracle,
    MonotonicityReport,
    box_product,
    bounded_on_ball_probe,
    check_gradient,
    empirical_epsilon,
    enlargement_check,
    enlargement_gap,
    eps_subgradient_check,
    geodesic_ball,
    intersection,
    make_subdifferential_field,
    monotonicity_probe,
    negated_field,
    normal_element,
    sample_pairs,
    whole_manifold,
    witness_grid,
)
from .solver import (
    Diagnostics,
    GeometricSchedule,
    LivelockError,
    RunRecord,
    Schedules,
    SubproblemFailure,
    SubproblemResult,
    VipProblem,
    audit_error_criteria,
    audit_inclusion,
    diagnostics,
    fejer_certificate_abs,
    fejer_certificate_rel,
    fejer_start_index,
    ppm_absolute,
    ppm_relative,
    quasi_fejer_check,
    run_csv_header,
    run_csv_rows,
    run_record_payload,
    scaled_schedules,
    solve_subproblem,
    write_run_csv,
)
from .apps import (
    EquilibriumProblem,
    LibraryEntry,
    NlpEmbedding,
    NlpProblem,
    OptimizationProblem,
    check_equilibrium_assumptions,
    equilibrium_to_vip,
    kkt_residuals,
    library_entry,
    library_labels,
    nlp_embedding,
    nlp_to_vip,
    opt_to_vip,
    problem_library,
    solve_equilibrium,
    solve_nlp,
    solve_optimization,
)
from .kernels import HAS_NUMBA, USE_NUMBA, active_backend, warmup

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # geometry
    "Euclidean",
    "GeometryError",
    "Hyperboloid",
    "ManifoldOracle",
    "ManifoldPoint",
    "ProductManifold",
    "SymmetricPositiveDefinite",
    "TangentVector",
    "oracle_from_id",
    "point_from_payload",
    "point_payload",
    "product_manifold",
    "tangent_from_payload",
    "tangent_payload",
    # fields and sets
    "AssumptionError",
    "ConvexFunctionOracle",
    "FeasibilityError",
    "FeasibleSet",
    "FieldElement",
    "FieldOracle",
    "MonotonicityReport",
    "box_product",
    "bounded_on_ball_probe",
    "check_gradient",
    "empirical_epsilon",
    "enlargement_check",
    "enlargement_gap",
    "eps_subgradient_check",
    "geodesic_ball",
    "intersection",
    "make_subdifferential_field",
    "monotonicity_probe",
    "negated_field",
    "normal_element",
    "sample_pairs",
    "whole_manifold",
    "witness_grid",
    # solver
    "Diagnostics",
    "GeometricSchedule",
    "LivelockError",
    "RunRecord",
    "Schedules",
    "SubproblemFailure",
    "SubproblemResult",
    "VipProblem",
    "audit_error_criteria",
    "audit_inclusion",
    "diagnostics",
    "fejer_certificate_abs",
    "fejer_certificate_rel",
    "fejer_start_index",
    "ppm_absolute",
    "ppm_relative",
    "quasi_fejer_check",
    "run_csv_header",
    "run_csv_rows",
    "run_record_payload",
    "scaled_schedules",
    "solve_subproblem",
    "write_run_csv",
    # applications
    "EquilibriumProblem",
    "LibraryEntry",
    "NlpEmbedding",
    "NlpProblem",
    "OptimizationProblem",
    "check_equilibrium_assumptions",
    "equilibrium_to_vip",
    "kkt_residuals",
    "library_entry",
    "library_labels",
    "nlp_embedding",
    "nlp_to_vip",
    "opt_to_vip",
    "problem_library",
    "solve_equilibrium",
    "solve_nlp",
    "solve_optimization",
    # kernels
    "HAS_NUMBA",
    "USE_NUMBA",
    "active_backend",
    "warmup",
]
