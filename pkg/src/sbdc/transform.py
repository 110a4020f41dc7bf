"""Turn an idempotent pair into a congruence P and cut the result into blocks."""
from __future__ import annotations

import dataclasses

import numpy as np
import scipy.linalg

from .core import (BlockResidualExceeded, DimensionMismatch, FieldMismatch,
                   IllConditioned, MatrixSet, Mode, NumericalBreakdown,
                   RankTraceMismatch, SolverConfig, SymmetryKind,
                   validate_matrix_set)
from .idempotents import IdempotentPair


@dataclasses.dataclass(frozen=True, eq=False)
class TransformStep:
    P: np.ndarray
    sizes: tuple[int, int]
    mode: Mode
    projector_residual: float
    orthogonality: float | None = None
    off_block_residual: float = 0.0


def range_basis(E: np.ndarray, tol_rank: float) -> np.ndarray:
    """Orthonormal basis of the column space of E via column-pivoted QR."""
    Q, R, _ = scipy.linalg.qr(E, pivoting=True)
    d = np.abs(np.diag(R))
    if d.size == 0 or d[0] == 0:
        return Q[:, :0]
    rank = int(np.sum(d > tol_rank * d[0]))
    return Q[:, :rank]


def build_transform(pair: IdempotentPair, mode: Mode | str,
                    cfg: SolverConfig | None = None) -> TransformStep:
    """P whose leading columns span range(eps1) and trailing ones range(eps2).

    Per-block bases are orthonormal, so in orthogonal and unitary modes P
    is orthogonal/unitary as soon as the projectors are; that is checked.
    """
    cfg = cfg or SolverConfig()
    mode = Mode(mode)
    e1, e2 = pair.eps1, pair.eps2
    n = e1.shape[0]
    real = not np.any(e1.imag)
    if real:
        e1, e2 = e1.real, e2.real
    Q1 = range_basis(e1, cfg.tol_rank)
    Q2 = range_basis(e2, cfg.tol_rank)
    for Q, E in ((Q1, e1), (Q2, e2)):
        if abs(Q.shape[1] - np.trace(E).real) > 0.5:
            raise RankTraceMismatch(
                f"rank {Q.shape[1]} vs trace {np.trace(E).real:.6f} of an idempotent")
    n1 = Q1.shape[1]
    if n1 + Q2.shape[1] != n or n1 == 0 or n1 == n:
        raise RankTraceMismatch(f"ranks {n1} + {Q2.shape[1]} do not split {n}")
    P = np.hstack([Q1, Q2]).astype(np.complex128)

    orth = None
    if mode.restricted:
        orth = float(np.linalg.norm(P.conj().T @ P - np.eye(n)))
        if orth > cfg.tol_idem:
            raise NumericalBreakdown(f"P is not unitary: ||P*P - I|| = {orth:.3e}")
    else:
        cond = np.linalg.cond(P)
        if not cond <= 1 / cfg.tol_rank:
            raise IllConditioned(f"transform condition number {cond:.3e}")
    target = np.zeros((n, n))
    target[:n1, :n1] = np.eye(n1)
    proj_res = float(np.linalg.norm(np.linalg.solve(P, pair.eps1 @ P) - target))
    if proj_res > cfg.tol_idem * max(1.0, np.linalg.cond(P)):
        raise NumericalBreakdown(f"P does not diagonalize the idempotent: {proj_res:.3e}")
    return TransformStep(P, (n1, n - n1), mode, proj_res, orth)


def apply_congruence(P: np.ndarray, mset: MatrixSet, mode: Mode | str | None = None,
                     cfg: SolverConfig | None = None) -> MatrixSet:
    """{P^T A_i P} for symmetric sets, {P^* A_i P} for Hermitian sets."""
    P = np.asarray(P, dtype=np.complex128)
    if P.shape != (mset.n, mset.n):
        raise DimensionMismatch(f"P has shape {P.shape}, set has n={mset.n}")
    if mset.is_real and np.any(P.imag):
        raise FieldMismatch("complex transform applied to a real set")
    Pop = P.T if mset.kind is SymmetryKind.SYMMETRIC else P.conj().T
    out = tuple(Pop @ A @ P for A in mset.matrices)
    if cfg is None:
        # rounding grows with ||P||^2; keep the check meaningful but loose
        cfg = SolverConfig(tol_sym=max(1e-10, 1e-12 * np.linalg.norm(P, 2) ** 2))
    return validate_matrix_set(MatrixSet(out, mset.kind, mset.field), cfg)


def off_block_norm(A: np.ndarray, sizes) -> float:
    """Frobenius norm of everything outside the diagonal blocks given by ``sizes``."""
    mask = np.ones(A.shape, dtype=bool)
    start = 0
    for s in sizes:
        mask[start:start + s, start:start + s] = False
        start += s
    return float(np.linalg.norm(A[mask]))


def extract_blocks(mset: MatrixSet, sizes, cfg: SolverConfig | None = None):
    """Split every matrix into its two diagonal blocks.

    Returns ``(left, right, residual)`` where residual is the largest
    off-diagonal Frobenius norm relative to the matrix norm. Raises
    BlockResidualExceeded above ``cfg.tol_block``.
    """
    cfg = cfg or SolverConfig()
    n1, n2 = sizes
    if n1 + n2 != mset.n or n1 < 1 or n2 < 1:
        raise DimensionMismatch(f"sizes {sizes} do not split n={mset.n}")
    residual = 0.0
    left, right = [], []
    for A in mset.matrices:
        nrm = np.linalg.norm(A)
        off = off_block_norm(A, sizes)
        residual = max(residual, off / nrm if nrm > 0 else off)
        left.append(A[:n1, :n1])
        right.append(A[n1:, n1:])
    if residual > cfg.tol_block:
        raise BlockResidualExceeded(f"off-block residual {residual:.3e} > {cfg.tol_block:.1e}")
    lset = validate_matrix_set(MatrixSet(tuple(left), mset.kind, mset.field), cfg)
    rset = validate_matrix_set(MatrixSet(tuple(right), mset.kind, mset.field), cfg)
    return lset, rset, residual

