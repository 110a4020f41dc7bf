"""Search for a nontrivial idempotent in a center.

The quadratic system X^2 = X over the center is not solved directly.
Instead a random center element is drawn and its eigenvalues are clustered.
The spectral projector onto one cluster is a polynomial in that element, so
it lies in the center too. A cheap scan of individual basis elements runs
first.
"""
from __future__ import annotations

import dataclasses
import enum
import logging

import numpy as np

from .center import CenterBasis, echelon_basis, membership_residual, nullspace
from .core import ClusterAmbiguity, Field, Mode, SolverConfig

logger = logging.getLogger(__name__)


class Evidence(str, enum.Enum):
    DIM_ONE = "DimOne"
    ALL_SINGLE_CLUSTER = "AllSingleCluster"
    BUDGET_EXHAUSTED = "BudgetExhausted"

    @property
    def certified(self) -> bool:
        """Only a one-dimensional center proves indecomposability."""
        return self is Evidence.DIM_ONE


@dataclasses.dataclass(frozen=True, eq=False)
class IdempotentPair:
    eps1: np.ndarray
    eps2: np.ndarray
    idem_residual: float
    orth_residual: float
    member_residual: float
    symmetric: bool

    @property
    def rank1(self) -> int:
        return int(round(np.trace(self.eps1).real))


@dataclasses.dataclass(frozen=True, eq=False)
class SplitOutcome:
    """Either ``pair`` is set (a split was found) or ``evidence`` is."""

    pair: IdempotentPair | None = None
    evidence: Evidence | None = None
    tries: int = 0
    restricted_dim: int | None = None

    @property
    def found(self) -> bool:
        return self.pair is not None

    @classmethod
    def none_found(cls, evidence, tries=0, restricted_dim=None):
        return cls(None, Evidence(evidence), tries, restricted_dim)


def _fro(X) -> float:
    return float(np.linalg.norm(X))


def make_pair(eps1: np.ndarray, cb: CenterBasis, cfg: SolverConfig) -> IdempotentPair | None:
    """Complete ``eps1`` to a pair and check it; None if any check fails.

    Residuals are normalized by max(1, ||eps||_F)^2 for idempotency and
    orthogonality, and as in :func:`membership_residual` for membership.
    """
    n = cb.n
    eps1 = np.asarray(eps1, dtype=np.complex128)
    if cb.coeff_field is Field.REAL and not cb.realified:
        eps1 = eps1.real.astype(np.complex128)
    eye = np.eye(n)
    eps2 = eye - eps1
    if _fro(eps1) <= cfg.tol_idem or _fro(eps2) <= cfg.tol_idem:
        return None
    scale = max(1.0, _fro(eps1), _fro(eps2)) ** 2
    idem = max(_fro(eps1 @ eps1 - eps1), _fro(eps2 @ eps2 - eps2)) / scale
    orth = (_fro(eps1 @ eps2) + _fro(eps2 @ eps1)) / scale
    member = max(membership_residual(cb, eps1), membership_residual(cb, eps2))
    sym = _fro(eps1 - eps1.conj().T) / max(1.0, _fro(eps1)) <= cfg.tol_idem
    tr = np.trace(eps1)
    if not (idem <= cfg.tol_idem and orth <= cfg.tol_idem and member <= cfg.tol_idem):
        return None
    if abs(tr.imag) > 0.25 or not 0.5 < tr.real < n - 0.5:
        return None
    return IdempotentPair(eps1, eps2, idem, orth, member, sym)


def restrict_center(cb: CenterBasis, mode: Mode | str, cfg: SolverConfig | None = None) -> CenterBasis:
    """Subspace of symmetric (orthogonal mode) or Hermitian (unitary mode) elements.

    Other modes return ``cb`` unchanged.
    """
    cfg = cfg or SolverConfig()
    mode = Mode(mode)
    if not mode.restricted:
        return cb
    # coefficient vectors c with sum_j c_j (B_j - B_j^*) = 0
    cols = []
    for B in cb.basis:
        D = B - (B.T if mode is Mode.ORTHOGONAL else B.conj().T)
        if cb.realified:
            cols.append(np.concatenate([D.real.ravel(), D.imag.ravel()]))
        else:
            cols.append(D.real.ravel() if cb.coeff_field is Field.REAL else D.ravel())
    # basis elements are O(1), so an absolute floor guards against noise
    C = nullspace(np.column_stack(cols), cfg.tol_rank, floor=cfg.tol_rank)
    if cb.coeff_field is Field.REAL:
        C = C.real
    mats = []
    for j in range(C.shape[1]):
        X = cb.element(C[:, j])
        mats.append((X + X.conj().T) / 2 if mode is Mode.UNITARY else (X + X.T) / 2)
    return CenterBasis.from_matrices(mats, cb.coeff_field, cb.realified, cfg.tol_rank)


def deterministic_scan(cb: CenterBasis, cfg: SolverConfig | None = None) -> SplitOutcome:
    """Look for a basis element X with X^2 = cX, c != 0, and return X/c.

    Both ``cb.basis`` and an echelon-form basis of the same span are
    scanned. Never certifies absence.
    """
    cfg = cfg or SolverConfig()
    candidates = list(cb.basis) + echelon_basis(cb)
    for X in candidates:
        X2 = X @ X
        t2 = np.trace(X2)
        if abs(t2) > cfg.tol_idem * max(1.0, _fro(X)) ** 2:
            c = np.trace(X2 @ X) / t2
        else:
            denom = np.vdot(X, X)
            c = np.vdot(X, X2) / denom if denom else 0
        if abs(c) <= cfg.tol_idem:
            continue
        if _fro(X2 - c * X) > cfg.tol_idem * max(1.0, _fro(X2)):
            continue
        if (cb.coeff_field is Field.REAL or cb.realified) and abs(c.imag) > cfg.tol_idem * abs(c):
            continue
        if cb.coeff_field is Field.REAL or cb.realified:
            c = c.real
        pair = make_pair(X / c, cb, cfg)
        if pair is not None:
            return SplitOutcome(pair=pair, tries=0)
    return SplitOutcome.none_found(Evidence.BUDGET_EXHAUSTED)


def _cluster(eigs: np.ndarray, tol: float, ambiguous: float) -> list[list[int]]:
    """Single-linkage clusters of eigenvalues within ``tol`` of each other."""
    k = len(eigs)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            d = abs(eigs[i] - eigs[j])
            if ambiguous < d <= tol:
                raise ClusterAmbiguity(
                    f"eigenvalue gap {d:.3e} lies in the ambiguous band ({ambiguous:.1e}, {tol:.1e}]")
            if d <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def hermite_projector(X: np.ndarray, nodes, mults, chosen) -> np.ndarray:
    """Evaluate q(X) where q interpolates 1 on chosen nodes and 0 elsewhere.

    Each node is confluent of order ``mults[k]`` (all derivatives up to that
    order vanish), which makes q(X) the spectral projector even when X has
    nontrivial Jordan blocks. Newton form with confluent divided differences.
    """
    xs, fs = [], []
    for z, m, c in zip(nodes, mults, chosen):
        xs.extend([z] * m)
        fs.extend([1.0 if c else 0.0] * m)
    N = len(xs)
    xs = np.asarray(xs, dtype=np.complex128)
    table = np.asarray(fs, dtype=np.complex128)
    coef = [table[0]]
    for level in range(1, N):
        nxt = np.empty(N - level, dtype=np.complex128)
        for i in range(N - level):
            dx = xs[i + level] - xs[i]
            # repeated node: the derivative data is zero
            nxt[i] = 0.0 if dx == 0 else (table[i + 1] - table[i]) / dx
        table = nxt
        coef.append(table[0])
    n = X.shape[0]
    eye = np.eye(n)
    result = coef[0] * eye
    basis_poly = eye.astype(np.complex128)
    for k in range(1, N):
        basis_poly = basis_poly @ (X - xs[k - 1] * eye)
        result = result + coef[k] * basis_poly
    return result


def spectral_split(X: np.ndarray, cb: CenterBasis, field: Field | str | None = None,
                   cfg: SolverConfig | None = None) -> SplitOutcome:
    """Split off the eigenvalue cluster of X with the smallest eigenvalue.

    Eigenvalues closer than ``cluster_gap * ||X||_2`` are merged. Over the
    real coefficient field clusters are also merged with their complex
    conjugates, so the projector is a real polynomial in X.
    """
    cfg = cfg or SolverConfig()
    field = Field(field) if field is not None else cb.coeff_field
    X = np.asarray(X, dtype=np.complex128)
    scale = np.linalg.norm(X, 2)
    if scale == 0:
        return SplitOutcome.none_found(Evidence.ALL_SINGLE_CLUSTER, 1)
    real_x = not np.any(X.imag)
    eigs = np.linalg.eigvals(X.real if real_x else X).astype(np.complex128)
    order = np.lexsort((eigs.imag, eigs.real))
    eigs = eigs[order]
    tol = cfg.cluster_gap * scale
    groups = _cluster(eigs, tol, tol / 10)
    means = [eigs[g].mean() for g in groups]

    # conjugate-closed super-clusters
    label = list(range(len(groups)))
    if field is Field.REAL or real_x:
        for a, mu in enumerate(means):
            for b, nu in enumerate(means):
                if abs(np.conj(mu) - nu) <= tol and label[a] != label[b]:
                    old, new = label[b], label[a]
                    label = [new if x == old else x for x in label]
    if len(set(label)) < 2:
        return SplitOutcome.none_found(Evidence.ALL_SINGLE_CLUSTER, 1)

    first = min(range(len(groups)), key=lambda g: min(groups[g]))
    chosen = [label[g] == label[first] for g in range(len(groups))]
    pi = hermite_projector(X, means, [len(g) for g in groups], chosen)
    if field is Field.REAL and real_x:
        pi = pi.real
    pair = make_pair(pi, cb, cfg)
    if pair is None:
        logger.debug("spectral projector failed verification")
        return SplitOutcome.none_found(Evidence.BUDGET_EXHAUSTED, 1)
    return SplitOutcome(pair=pair, tries=1)


def find_split(cb: CenterBasis, mode: Mode | str, field: Field | str | None = None,
               cfg: SolverConfig | None = None, rng: np.random.Generator | None = None,
               skip_scan: bool = False) -> SplitOutcome:
    """Restrict, scan, then try up to ``cfg.max_tries`` random elements.

    ``field`` is the coefficient field of the center; it defaults to
    ``cb.coeff_field``. Random coefficients are complex only for complex
    congruence.
    """
    cfg = cfg or SolverConfig()
    mode = Mode(mode)
    field = Field(field) if field is not None else cb.coeff_field
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    rcb = restrict_center(cb, mode, cfg)
    if rcb.dim == 1:
        return SplitOutcome.none_found(Evidence.DIM_ONE, 0, 1)
    if not skip_scan:
        out = deterministic_scan(rcb, cfg)
        if out.found:
            return dataclasses.replace(out, restricted_dim=rcb.dim)

    complex_coeffs = field is Field.COMPLEX and not rcb.realified
    ambiguities = single = 0
    for t in range(cfg.max_tries):
        gamma = rng.standard_normal(rcb.dim)
        if complex_coeffs:
            gamma = gamma + 1j * rng.standard_normal(rcb.dim)
        Y = rcb.element(gamma)
        try:
            out = spectral_split(Y, rcb, field, cfg)
        except ClusterAmbiguity:
            ambiguities += 1
            continue
        if out.found:
            return dataclasses.replace(out, tries=t + 1, restricted_dim=rcb.dim)
        if out.evidence is Evidence.ALL_SINGLE_CLUSTER:
            single += 1
    if ambiguities == cfg.max_tries:
        raise ClusterAmbiguity(f"all {cfg.max_tries} tries hit ambiguous eigenvalue gaps")
    evidence = Evidence.ALL_SINGLE_CLUSTER if single == cfg.max_tries else Evidence.BUDGET_EXHAUSTED
    return SplitOutcome.none_found(evidence, cfg.max_tries, rcb.dim)
