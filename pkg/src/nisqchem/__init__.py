"""Desk-scale NISQ chemistry toolkit.

Pipeline: correlation-increment orbital selection -> frozen-core fold ->
fermion-to-qubit mapping with two-qubit symmetry reduction -> (noisy) VQE
with the ancilla-augmented ansatz -> zero-noise extrapolation, validated
against exact diagonalization.
"""

__version__ = "0.1.0"

from .hamstore import (
    ActiveSpaceHamiltonian,
    HARTREE_TO_KCAL,
    OrbitalIntegrals,
    barrier_kcal,
    fold_core,
    parse_fcidump,
    write_fcidump,
)
from .casci import CIResult, Determinant, enumerate_determinants, ground_state, matrix_element

__all__ = [
    "ActiveSpaceHamiltonian",
    "CIResult",
    "Determinant",
    "HARTREE_TO_KCAL",
    "OrbitalIntegrals",
    "barrier_kcal",
    "enumerate_determinants",
    "fold_core",
    "ground_state",
    "matrix_element",
    "parse_fcidump",
    "write_fcidump",
    "__version__",
]
