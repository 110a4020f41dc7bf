"""Finest simultaneous block diagonalization of symmetric and Hermitian matrices.

The center of a matrix family, {X : A_i X symmetric (Hermitian)}, is a
Jordan algebra whose complete sets of orthogonal idempotents correspond to
the simultaneous block diagonalizations of the family. This package computes
the center, finds idempotents in it and recursively splits the family.
"""
from .center import (CenterBasis, center_basis, jordan_product,
                     membership_residual)
from .core import (Field, MatrixSet, Mode, SBDCError, SolverConfig,
                   SymmetryKind, make_matrix_set, validate_matrix_set)
from .driver import (Decomposition, DecompositionNode, commutation_check, sbdc,
                     verify)
from .idempotents import (Evidence, IdempotentPair, SplitOutcome,
                          deterministic_scan, find_split, restrict_center,
                          spectral_split)
from .io import (DecompositionReport, load_matrix_set, load_report,
                 save_matrix_set, save_report)
from .quadratic import format_quadratic_form, parse_quadratic_forms
from .transform import (TransformStep, apply_congruence, build_transform,
                        extract_blocks)

__version__ = "0.1.0"

__all__ = [
    "CenterBasis", "Decomposition", "DecompositionNode", "DecompositionReport",
    "Evidence", "Field", "IdempotentPair", "MatrixSet", "Mode", "SBDCError",
    "SolverConfig", "SplitOutcome", "SymmetryKind", "TransformStep",
    "apply_congruence", "build_transform", "center_basis", "commutation_check",
    "deterministic_scan", "extract_blocks", "find_split", "format_quadratic_form",
    "jordan_product", "load_matrix_set", "load_report", "make_matrix_set",
    "membership_residual", "parse_quadratic_forms", "restrict_center",
    "save_matrix_set", "save_report", "sbdc", "spectral_split",
    "validate_matrix_set", "verify",
]
