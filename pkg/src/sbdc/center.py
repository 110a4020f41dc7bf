"""The center Z(A_1..A_m) = {X : A_i X is symmetric (Hermitian) for all i}.

The center is the nullspace of the linear map X -> (A_i X - (A_i X)^op)_i.
Its coefficient field is fixed once here:

* symmetric input over the reals: real unknowns, n^2 of them;
* symmetric input over the complexes: complex unknowns, n^2 of them;
* Hermitian input: the map is only real-linear, so X = U + iV is realified
  into 2 n^2 real unknowns and the center is a real vector space.

Vectors are row-major; realified vectors are ``[vec(Re X), vec(Im X)]``.
"""
from __future__ import annotations

import dataclasses
import logging

import numpy as np
import scipy.linalg

from .core import (DimensionMismatch, Field, MatrixSet, NumericalBreakdown,
                   SolverConfig, SymmetryKind)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class CenterBasis:
    """A basis of a center (or of a subspace of one).

    ``vectors`` has orthonormal columns spanning the same space as ``basis``
    in the vectorized inner product Re tr(X^* Y). ``realified`` marks the
    Hermitian case where the coefficient field is R but entries are complex.
    """

    n: int
    basis: tuple[np.ndarray, ...]
    coeff_field: Field
    realified: bool
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_vec(self, X: np.ndarray) -> np.ndarray:
        return _to_vec(X, self.coeff_field, self.realified)

    def from_vec(self, v: np.ndarray) -> np.ndarray:
        return _from_vec(v, self.n, self.coeff_field, self.realified)

    def element(self, coeffs) -> np.ndarray:
        """The matrix sum_j coeffs[j] * basis[j]."""
        coeffs = np.asarray(coeffs)
        X = np.zeros((self.n, self.n), dtype=np.complex128)
        for c, B in zip(coeffs, self.basis):
            X = X + c * B
        return X

    @classmethod
    def from_matrices(cls, matrices, coeff_field: Field | str, realified: bool = False,
                      tol_rank: float = 1e-10) -> "CenterBasis":
        """Wrap a spanning list of matrices; dependent ones are dropped.

        The given matrices are kept as ``basis`` (not orthonormalized) so that
        hand-picked bases survive for inspection and scanning.
        """
        coeff_field = Field(coeff_field)
        mats = [np.asarray(X, dtype=np.complex128) for X in matrices]
        n = mats[0].shape[0]
        kept, cols = [], []
        for X in mats:
            v = _to_vec(X, coeff_field, realified)
            trial = np.column_stack(cols + [v])
            s = np.linalg.svd(trial, compute_uv=False)
            if s[-1] > tol_rank * max(1.0, s[0]):
                kept.append(X)
                cols.append(v)
        if not kept:
            raise ValueError("no nonzero matrices given")
        Q, _ = np.linalg.qr(np.column_stack(cols))
        return cls(n, tuple(kept), coeff_field, realified, Q)


def _to_vec(X, coeff_field, realified):
    X = np.asarray(X)
    if realified:
        return np.concatenate([X.real.ravel(), X.imag.ravel()])
    if coeff_field is Field.REAL:
        return np.asarray(X.real, dtype=float).ravel()
    return np.asarray(X, dtype=np.complex128).ravel()


def _from_vec(v, n, coeff_field, realified):
    nn = n * n
    if realified:
        return (v[:nn] + 1j * v[nn:]).reshape(n, n)
    return np.asarray(v, dtype=np.complex128).reshape(n, n)


def _commutation_matrix(n: int) -> np.ndarray:
    """K with K vec(X) = vec(X^T) for row-major vec."""
    K = np.zeros((n * n, n * n))
    idx = np.arange(n * n).reshape(n, n)
    K[idx.T.ravel(), idx.ravel()] = 1.0
    return K


def center_operator(mset: MatrixSet) -> tuple[np.ndarray, Field, bool]:
    """Stacked matrix of the center's defining linear system.

    Returns ``(M, coeff_field, realified)``. For symmetric input only the
    strict upper triangle of A X - (A X)^T contributes rows (the diagonal is
    identically zero). For Hermitian input the real part contributes its
    strict upper triangle and the imaginary part its upper triangle
    including the diagonal.
    """
    n = mset.n
    eye = np.eye(n)
    K = _commutation_matrix(n)
    idx = np.arange(n * n).reshape(n, n)
    strict_upper = idx[np.triu_indices(n, 1)]
    upper = idx[np.triu_indices(n, 0)]
    blocks = []
    if mset.kind is SymmetryKind.SYMMETRIC:
        real = mset.field is Field.REAL
        for A in mset.matrices:
            L = np.kron(A.real if real else A, eye)
            blocks.append((L - K @ L)[strict_upper])
        M = np.vstack(blocks) if strict_upper.size else np.zeros((0, n * n))
        return M, mset.field, False
    for A in mset.matrices:
        Lr, Li = np.kron(A.real, eye), np.kron(A.imag, eye)
        re_w = np.hstack([Lr, -Li])
        im_w = np.hstack([Li, Lr])
        blocks.append((re_w - K @ re_w)[strict_upper])
        blocks.append((im_w + K @ im_w)[upper])
    return np.vstack(blocks), Field.REAL, True


def nullspace(M: np.ndarray, tol_rank: float, floor: float = 0.0) -> np.ndarray:
    """Orthonormal nullspace basis (columns).

    Singular values above ``max(tol_rank * s_max, floor)`` count toward the rank.
    """
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(ncols, dtype=M.dtype)
    try:
        _, s, vh = np.linalg.svd(M, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdown(f"SVD failed: {exc}") from exc
    cut = max(tol_rank * s[0], floor) if s.size else floor
    rank = int(np.sum(s > cut)) if s.size and s[0] > 0 else 0
    return vh[rank:].conj().T


def center_basis(mset: MatrixSet, cfg: SolverConfig | None = None) -> CenterBasis:
    """Orthonormal basis of Z(A_1..A_m) over the coefficient field of ``mset``."""
    cfg = cfg or SolverConfig()
    M, coeff_field, realified = center_operator(mset)
    N = nullspace(M, cfg.tol_rank)
    if coeff_field is Field.REAL:
        N = N.real
    n = mset.n
    basis = tuple(_from_vec(N[:, j], n, coeff_field, realified) for j in range(N.shape[1]))
    logger.debug("center of %d matrices of size %d: dim %d", mset.m, n, len(basis))
    if not basis:
        raise NumericalBreakdown("center came out empty; identity should always lie in it")
    return CenterBasis(n, basis, coeff_field, realified, N)


def jordan_product(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """X . Y = (XY + YX) / 2."""
    X, Y = np.asarray(X), np.asarray(Y)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape != Y.shape:
        raise DimensionMismatch(f"incompatible shapes {X.shape} and {Y.shape}")
    return (X @ Y + Y @ X) / 2


def project(cb: CenterBasis, X: np.ndarray) -> np.ndarray:
    """Orthogonal projection of X onto span(cb.basis)."""
    v = cb.to_vec(X)
    V = cb.vectors
    return cb.from_vec(V @ (V.conj().T @ v))


def membership_residual(cb: CenterBasis, X: np.ndarray) -> float:
    """``||X - proj(X)||_F / max(1, ||X||_F)`` for the span of ``cb``."""
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (cb.n, cb.n):
        raise DimensionMismatch(f"expected a {cb.n}x{cb.n} matrix, got {X.shape}")
    r = np.linalg.norm(X - project(cb, X))
    return float(r / max(1.0, np.linalg.norm(X)))


def echelon_basis(cb: CenterBasis) -> list[np.ndarray]:
    """A basis of span(cb) that is the identity on a set of pivot coordinates.

    This is the numerical analogue of reading a basis off a parameterized
    solution of the linear system, and tends to expose sparse elements such
    as rank-one idempotents.
    """
    V = cb.vectors
    _, _, piv = scipy.linalg.qr(V.conj().T, pivoting=True)
    W = V @ np.linalg.inv(V[piv[:cb.dim], :])
    out = []
    for j in range(cb.dim):
        w = W[:, j]
        w = np.where(np.abs(w) < 1e-13 * np.abs(w).max(), 0, w)
        out.append(cb.from_vec(w))
    return out
