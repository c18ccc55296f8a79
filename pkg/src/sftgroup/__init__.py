"""Exact computation in the continuous full group Γ_A of a one-sided topological Markov shift."""

from .adic_tables import (
    AdicTable,
    OrderClass,
    apply,
    classify_order,
    cocycle,
    compose,
    expand_row,
    expand_to_depth,
    identity_table,
    inverse,
    random_table,
    reduce,
    table_from_json,
    tables_equivalent,
    validate_table,
)
from .exceptions import ComputationError, SFTGroupError, ValidationError
from .invariants import (
    AbelianGroupPresentation,
    compare_invariants,
    det_id_minus_A,
    k0_group,
    simplicity_verdict,
    smith_normal_form,
)
from .matrices import builtin
from .perron_field import AlgebraicNumber, PerronData, compute_perron, endpoint_l, endpoint_r, kms_weight
from .pl_realization import (
    PLMap,
    check_semiconjugacy,
    derivative,
    eval_fA,
    eval_gi,
    export_pl,
    kms_expectation,
    pl_compose,
    pl_eval,
    pl_inverse,
    pl_to_table,
    rho,
    singular_sets,
    table_to_pl,
)
from .sft_core import EppPoint, TransitionMatrix, enumerate_words, validate_matrix
from .steps import StepFunction

__version__ = "0.1.0"


__all__ = [
    "AbelianGroupPresentation",
    "AdicTable",
    "AlgebraicNumber",
    "ComputationError",
    "EppPoint",
    "OrderClass",
    "PLMap",
    "PerronData",
    "SFTGroupError",
    "StepFunction",
    "TransitionMatrix",
    "ValidationError",
    "apply",
    "builtin",
    "check_semiconjugacy",
    "classify_order",
    "cocycle",
    "compare_invariants",
    "compose",
    "compute_perron",
    "derivative",
    "det_id_minus_A",
    "endpoint_l",
    "endpoint_r",
    "enumerate_words",
    "eval_fA",
    "eval_gi",
    "expand_row",
    "expand_to_depth",
    "export_pl",
    "identity_table",
    "inverse",
    "k0_group",
    "kms_expectation",
    "kms_weight",
    "pl_compose",
    "pl_eval",
    "pl_inverse",
    "pl_to_table",
    "random_table",
    "reduce",
    "rho",
    "simplicity_verdict",
    "singular_sets",
    "smith_normal_form",
    "table_from_json",
    "table_to_pl",
    "tables_equivalent",
    "validate_matrix",
    "validate_table",
]
