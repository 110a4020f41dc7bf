"""Shared types: errors, modes, solver configuration and validated matrix sets.

Matrices are stored as ``complex128`` arrays in row-major order whatever the
field. A real set is a set whose entries carry zero imaginary part; the
``field`` tag is a constraint, not a different representation.
"""
from __future__ import annotations

import dataclasses
import enum
from typing import Sequence

import numpy as np


class SBDCError(Exception):
    """Base class of every error raised by this package."""


class InputError(SBDCError, ValueError):
    """The caller handed in something malformed."""


class DimensionMismatch(InputError):
    pass


class SymmetryViolation(InputError):
    pass


class EmptySet(InputError):
    pass


class FieldMismatch(InputError):
    """Complex data where real data is required, or a forbidden field change."""


class ModeMismatch(InputError):
    """Mode is incompatible with the symmetry kind or field of the input."""


class NumericalError(SBDCError, ArithmeticError):
    """A numerical step failed or produced an untrustworthy result."""


class NumericalBreakdown(NumericalError):
    pass


class ClusterAmbiguity(NumericalError):
    pass


class RankTraceMismatch(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class BlockResidualExceeded(NumericalError):
    pass


class DepthExceeded(NumericalError):
    pass


class SymmetryKind(str, enum.Enum):
    SYMMETRIC = "symmetric"
    HERMITIAN = "hermitian"


class Field(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


class Mode(str, enum.Enum):
    CONGRUENCE = "congruence"
    ORTHOGONAL = "orthogonal"
    STAR = "star"
    UNITARY = "unitary"

    @property
    def restricted(self) -> bool:
        """True for the orthogonal and unitary variants."""
        return self in (Mode.ORTHOGONAL, Mode.UNITARY)


@dataclasses.dataclass(frozen=True)
class SolverConfig:
    """Tolerances and knobs for the whole pipeline.

    ``max_depth=None`` means "the dimension of the input set".
    """

    tol_sym: float = 1e-10
    tol_rank: float = 1e-10
    tol_idem: float = 1e-8
    tol_block: float = 1e-8
    cluster_gap: float = 1e-6
    max_tries: int = 8
    seed: int = 0
    max_depth: int | None = None

    def __post_init__(self):
        for name in ("tol_sym", "tol_rank", "tol_idem", "tol_block", "cluster_gap"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be strictly positive")
        if self.max_tries < 1:
            raise InputError("max_tries must be >= 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise InputError("max_depth must be >= 1")

    def replace(self, **changes) -> "SolverConfig":
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True, eq=False)
class MatrixSet:
    """A family A_1..A_m of n x n matrices sharing a symmetry kind and field.

    Construct through :func:`make_matrix_set` or :func:`validate_matrix_set`;
    the bare constructor does not check anything.
    """

    matrices: tuple[np.ndarray, ...]
    kind: SymmetryKind
    field: Field
    residuals: tuple[float, ...] = ()

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.matrices)

    @property
    def is_real(self) -> bool:
        return self.field is Field.REAL

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]

    def with_field(self, field: Field | str) -> "MatrixSet":
        """Return the same set re-tagged with ``field``; only widening is allowed."""
        field = Field(field)
        if field is self.field:
            return self
        if field is Field.REAL:
            raise FieldMismatch("cannot narrow a complex set to the real field")
        return MatrixSet(self.matrices, self.kind, field, self.residuals)


def adjoint(A: np.ndarray, kind: SymmetryKind) -> np.ndarray:
    """Transpose for symmetric kind, conjugate transpose for Hermitian kind."""
    return A.T if kind is SymmetryKind.SYMMETRIC else A.conj().T


def symmetry_residual(A: np.ndarray, kind: SymmetryKind) -> float:
    """``||A - A^op||_F / max(1, ||A||_F)``."""
    return float(np.linalg.norm(A - adjoint(A, kind)) / max(1.0, np.linalg.norm(A)))


def validate_matrix_set(mset: MatrixSet, cfg: SolverConfig | None = None) -> MatrixSet:
    """Check dimensions, field and symmetry, then symmetrize.

    Matrices whose symmetry residual is at most ``cfg.tol_sym`` are replaced
    by ``(A + A^op) / 2``; anything further off raises SymmetryViolation.
    Validating an already validated set returns identical entries.
    """
    cfg = cfg or SolverConfig()
    mats = [np.array(A, dtype=np.complex128) for A in mset.matrices]
    if not mats:
        raise EmptySet("matrix set is empty")
    kind = SymmetryKind(mset.kind)
    field = Field(mset.field)
    n = mats[0].shape[0] if mats[0].ndim == 2 else -1
    if n < 1:
        raise DimensionMismatch("matrices must be non-empty and two-dimensional")
    for i, A in enumerate(mats):
        if A.shape != (n, n):
            raise DimensionMismatch(f"matrix {i} has shape {A.shape}, expected {(n, n)}")
        if not np.all(np.isfinite(A)):
            raise InputError(f"matrix {i} has non-finite entries")
    if kind is SymmetryKind.HERMITIAN and field is Field.REAL:
        raise FieldMismatch("Hermitian sets live over the complex field")

    out, residuals = [], []
    for i, A in enumerate(mats):
        if field is Field.REAL:
            imag = np.linalg.norm(A.imag) / max(1.0, np.linalg.norm(A))
            if imag > cfg.tol_sym:
                raise FieldMismatch(f"matrix {i} has complex entries but field is real")
            A = A.real.astype(np.complex128)
        r = symmetry_residual(A, kind)
        if r > cfg.tol_sym:
            raise SymmetryViolation(
                f"matrix {i} is not {kind.value}: residual {r:.3e} > {cfg.tol_sym:.1e}")
        A = (A + adjoint(A, kind)) / 2
        A.setflags(write=False)
        out.append(A)
        residuals.append(r)
    return MatrixSet(tuple(out), kind, field, tuple(residuals))


def make_matrix_set(matrices: Sequence, kind: SymmetryKind | str = "symmetric",
                    field: Field | str | None = None,
                    cfg: SolverConfig | None = None) -> MatrixSet:
    """Build and validate a MatrixSet from array-likes.

    ``field`` defaults to real when every entry is real and the kind is
    symmetric, complex otherwise.
    """
    kind = SymmetryKind(kind)
    mats = tuple(np.asarray(A) for A in matrices)
    if field is None:
        real = all(not np.iscomplexobj(A) or not np.any(np.imag(A)) for A in mats)
        field = Field.REAL if real and kind is SymmetryKind.SYMMETRIC else Field.COMPLEX
    return validate_matrix_set(MatrixSet(mats, kind, Field(field)), cfg)


def check_mode(mset: MatrixSet, mode: Mode | str) -> Mode:
    """Raise ModeMismatch unless ``mode`` applies to ``mset``."""
    mode = Mode(mode)
    if mode in (Mode.CONGRUENCE, Mode.ORTHOGONAL) and mset.kind is not SymmetryKind.SYMMETRIC:
        raise ModeMismatch(f"{mode.value} mode needs symmetric input")
    if mode in (Mode.STAR, Mode.UNITARY) and mset.kind is not SymmetryKind.HERMITIAN:
        raise ModeMismatch(f"{mode.value} mode needs Hermitian input")
    if mode is Mode.ORTHOGONAL and mset.field is not Field.REAL:
        raise ModeMismatch("orthogonal mode needs real input")
    return mode
