"""Orthogonal zeroing of diagonal entries of real matrices."""
from .conjugate import (
    ZeroingCertificate,
    build_phi,
    build_phi_step,
    conj_zero,
    conj_zero_prime,
    constant_diagonal,
    hollowize,
)
from .definiteness import LadderLevel, classify, conditions_A, conditions_B, is_nondefinite
from .errors import (
    ConditionFailure,
    ConditionsNotMet,
    DefiniteInput,
    FinalStepConditionsNotMet,
    HollowkitError,
    InvalidMatrix,
    NotTraceless,
    NumericalBreakdown,
    StepConditionsNotMet,
)
from .lab import OptimizerConfig, SearchResult, minimize_diag_residual, test_conjecture
from .matrix import DEFAULT_TOL, SignedPermutation, ToleranceConfig
from .oracle import achievable_pq, brute_force_conj, verify_certificate
from .zero3 import build_R_condA, build_R_condB, find_givens_zero, zero_entry_1_1

__all__ = [
    "DEFAULT_TOL", "ConditionFailure", "ConditionsNotMet", "DefiniteInput",
    "FinalStepConditionsNotMet", "HollowkitError", "InvalidMatrix", "LadderLevel",
    "NotTraceless", "NumericalBreakdown", "OptimizerConfig", "SearchResult",
    "SignedPermutation", "StepConditionsNotMet", "ToleranceConfig", "ZeroingCertificate",
    "achievable_pq", "brute_force_conj", "build_R_condA", "build_R_condB", "build_phi",
    "build_phi_step", "classify", "conditions_A", "conditions_B", "conj_zero",
    "conj_zero_prime", "constant_diagonal", "find_givens_zero", "hollowize",
    "is_nondefinite", "minimize_diag_residual", "test_conjecture", "verify_certificate",
    "zero_entry_1_1",
]
