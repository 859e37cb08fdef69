"""Generalized inverses in Minkowski space, centred on the m-DMP inverse ``A^D A A^m``."""

from .classical import GinvKind, dmp, drazin, drazin_hs, group_inverse, moore_penrose
from .core import (
    DEFAULT_TOL,
    FullRankChain,
    HSDecomposition,
    MetricPartition,
    Tolerances,
    delta_matrix,
    full_rank_chain,
    full_rank_factor,
    hs_decompose,
    matrix_index,
    metric_partition,
    minkowski_adjoint,
    minkowski_metric,
    numeric_rank,
)
from .errors import (
    ConditionFailed,
    FullRank,
    IndexTooLarge,
    MdmpError,
    NearSingularFactor,
    NilpotentTermination,
    NoConvergence,
    NotExists,
    ParseError,
    ShapeMismatch,
    SingularBordered,
    SingularDelta,
    SingularG1,
    SingularShift,
    SingularWV,
    SpectrumNotStable,
    ZeroMatrix,
    ZeroPower,
)
from .minkowski import (
    MDMP_ROUTES,
    ExistenceReport,
    dual_mdmp,
    dual_mdmp_hs,
    m_core,
    mdmp,
    mdmp_composite,
    mdmp_fullrank,
    mdmp_hs,
    minkowski_exists,
    minkowski_inverse,
    minkowski_inverse_hs,
)
from .representations import (
    LIMIT_FORMULAS,
    LimitResult,
    LimitSchedule,
    QuadratureConfig,
    integral_closed_form,
    mdmp_integral,
    mdmp_limit,
    minkowski_limit,
)
from .solvers import (
    ComplementBases,
    MinResult,
    SolveResult,
    build_complement_bases,
    cramer_solve,
    least_norm_min,
    solve_projected,
)
from .verify import (
    EquationReport,
    check_characterizations,
    check_drazin,
    check_mdmp_system,
    check_minkowski,
    check_penrose,
    property_suite,
    random_instance,
    random_instances,
)

__all__ = [
    "GinvKind",
    "dmp",
    "drazin",
    "drazin_hs",
    "group_inverse",
    "moore_penrose",
    "DEFAULT_TOL",
    "FullRankChain",
    "HSDecomposition",
    "MetricPartition",
    "Tolerances",
    "delta_matrix",
    "full_rank_chain",
    "full_rank_factor",
    "hs_decompose",
    "matrix_index",
    "metric_partition",
    "minkowski_adjoint",
    "minkowski_metric",
    "numeric_rank",
    "ConditionFailed",
    "FullRank",
    "IndexTooLarge",
    "MdmpError",
    "NearSingularFactor",
    "NilpotentTermination",
    "NoConvergence",
    "NotExists",
    "ParseError",
    "ShapeMismatch",
    "SingularBordered",
    "SingularDelta",
    "SingularG1",
    "SingularShift",
    "SingularWV",
    "SpectrumNotStable",
    "ZeroMatrix",
    "ZeroPower",
    "MDMP_ROUTES",
    "ExistenceReport",
    "dual_mdmp",
    "dual_mdmp_hs",
    "m_core",
    "mdmp",
    "mdmp_composite",
    "mdmp_fullrank",
    "mdmp_hs",
    "minkowski_exists",
    "minkowski_inverse",
    "minkowski_inverse_hs",
    "LIMIT_FORMULAS",
    "LimitResult",
    "LimitSchedule",
    "QuadratureConfig",
    "integral_closed_form",
    "mdmp_integral",
    "mdmp_limit",
    "minkowski_limit",
    "ComplementBases",
    "MinResult",
    "SolveResult",
    "build_complement_bases",
    "cramer_solve",
    "least_norm_min",
    "solve_projected",
    "EquationReport",
    "check_characterizations",
    "check_drazin",
    "check_mdmp_system",
    "check_minkowski",
    "check_penrose",
    "property_suite",
    "random_instance",
    "random_instances",
]

__version__ = "0.1.0"
