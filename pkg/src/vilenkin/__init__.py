"""Fourier analysis on bounded Vilenkin groups, with an exactly verified
counterexample for Cesaro summability in the martingale Hardy space H_{1/2}.
"""

from .errors import CapExceededError, DomainError, VerificationError
from .group import (
    Cylinder,
    GroupPattern,
    GroupSpec,
    all_cylinders,
    build_group_spec,
    cylinder_of,
    digit_compose,
    digit_decompose,
    materialize_group,
    parse_group_text,
    point_from_index,
    point_to_index,
    q_number,
)
from .transform import (
    NAIVE_ORACLE_CAP,
    CharacterBasis,
    CylinderFunction,
    Spectrum,
    character_basis,
    character_eval,
    coarsen,
    forward_transform,
    inverse_transform,
    naive_transform_oracle,
    random_cylinder_function,
    sup_abs,
    sup_rel_error,
)
from .kernels import (
    AtomReport,
    SummabilityResult,
    dirichlet_kernel,
    fejer_kernel,
    fejer_mean_direct,
    fejer_mean_multiplier,
    hardy_quasinorm_estimate,
    lp_quasinorm,
    maximal_function,
    partial_sum,
    summed_partial_sums,
    validate_p_atom,
    zero_cylinder_indicator,
)
from .counterexample import (
    AlphaSequence,
    BoundLedger,
    CounterexampleSpec,
    DivergenceReport,
    KernelBoundReport,
    LevelCertificate,
    SigmaDecomposition,
    build_alpha_sequence,
    bound_chain_evaluate,
    closed_form_partial_sum,
    coefficient_oracle,
    divergence_report,
    lemma2_verify,
    materialize_f,
    oracle_spectrum,
    plan_counterexample,
    sequence_from_levels,
    sigma_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "DomainError",
    "VerificationError",
    "Cylinder",
    "GroupPattern",
    "GroupSpec",
    "all_cylinders",
    "build_group_spec",
    "cylinder_of",
    "digit_compose",
    "digit_decompose",
    "materialize_group",
    "parse_group_text",
    "point_from_index",
    "point_to_index",
    "q_number",
    "NAIVE_ORACLE_CAP",
    "CharacterBasis",
    "CylinderFunction",
    "Spectrum",
    "character_basis",
    "character_eval",
    "coarsen",
    "forward_transform",
    "inverse_transform",
    "naive_transform_oracle",
    "random_cylinder_function",
    "sup_abs",
    "sup_rel_error",
    "AtomReport",
    "SummabilityResult",
    "dirichlet_kernel",
    "fejer_kernel",
    "fejer_mean_direct",
    "fejer_mean_multiplier",
    "hardy_quasinorm_estimate",
    "lp_quasinorm",
    "maximal_function",
    "partial_sum",
    "summed_partial_sums",
    "validate_p_atom",
    "zero_cylinder_indicator",
    "AlphaSequence",
    "BoundLedger",
    "CounterexampleSpec",
    "DivergenceReport",
    "KernelBoundReport",
    "LevelCertificate",
    "SigmaDecomposition",
    "build_alpha_sequence",
    "bound_chain_evaluate",
    "closed_form_partial_sum",
    "coefficient_oracle",
    "divergence_report",
    "lemma2_verify",
    "materialize_f",
    "oracle_spectrum",
    "plan_counterexample",
    "sequence_from_levels",
    "sigma_decomposition",
    "__version__",
]
