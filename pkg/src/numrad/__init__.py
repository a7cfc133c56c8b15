"""Numerical-radius seminorms, best approximation and minimal extensions."""

from .errors import (
    CapabilityError,
    DegenerateInputError,
    DimensionMismatchError,
    NumradError,
    SolverError,
)
from .spaces import (
    DEFAULT_PHASE_RESOLUTION,
    DualityPair,
    NormSpec,
    PairSet,
    ScalarField,
    Space,
    dual_norm,
    extreme_pairs,
    norm,
    peak_functional,
    q_pairs,
    radius_pairs,
    signed_closure,
)
from .radius import (
    RadiusReport,
    active_set,
    numerical_index,
    numerical_radius,
    operator_norm,
    q_radius,
    range_boundary_samples,
    seminorm,
    w_equivalent,
)
from .approx import ApproxProblem, ApproxResult, OperatorSubspace, distance, solve
from .certify import (
    Certificate,
    SubaReport,
    best_approx_certificate,
    caratheodory_reduce,
    restrict,
    suba_constant,
)
from .extend import (
    ExtensionResult,
    Subspace,
    annihilator_basis,
    default_extension,
    hyperplane_projections,
    induced_space,
    linf_hyperplane_lambda,
    minimal_extension,
    minimal_projection,
    paper_examples,
    restricted_op_norm,
    restricted_radius,
    seminorm_is_norm_check,
)

__version__ = "1.0.0"

__all__ = [
    "ApproxProblem",
    "ApproxResult",
    "CapabilityError",
    "Certificate",
    "DEFAULT_PHASE_RESOLUTION",
    "DegenerateInputError",
    "DimensionMismatchError",
    "DualityPair",
    "ExtensionResult",
    "NormSpec",
    "NumradError",
    "OperatorSubspace",
    "PairSet",
    "RadiusReport",
    "ScalarField",
    "SolverError",
    "Space",
    "SubaReport",
    "Subspace",
    "active_set",
    "annihilator_basis",
    "best_approx_certificate",
    "caratheodory_reduce",
    "default_extension",
    "distance",
    "dual_norm",
    "extreme_pairs",
    "hyperplane_projections",
    "induced_space",
    "linf_hyperplane_lambda",
    "minimal_extension",
    "minimal_projection",
    "norm",
    "numerical_index",
    "numerical_radius",
    "operator_norm",
    "paper_examples",
    "peak_functional",
    "q_pairs",
    "q_radius",
    "radius_pairs",
    "range_boundary_samples",
    "restrict",
    "restricted_op_norm",
    "restricted_radius",
    "seminorm",
    "seminorm_is_norm_check",
    "signed_closure",
    "solve",
    "suba_constant",
    "w_equivalent",
]
