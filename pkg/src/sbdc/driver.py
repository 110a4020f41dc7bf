"""Recursive simultaneous block diagonalization and its verification."""
from __future__ import annotations

import dataclasses
import hashlib
import itertools
import logging

import numpy as np
import scipy.linalg

from .center import center_basis
from .core import (BlockResidualExceeded, DepthExceeded, IllConditioned,
                   MatrixSet, Mode, NumericalBreakdown, RankTraceMismatch,
                   SolverConfig, SymmetryKind, adjoint, check_mode,
                   symmetry_residual, validate_matrix_set)
from .idempotents import Evidence, IdempotentPair, find_split
from .transform import (TransformStep, apply_congruence, build_transform,
                        extract_blocks, off_block_norm)

logger = logging.getLogger(__name__)

_SPLIT_FAILURES = (BlockResidualExceeded, IllConditioned, RankTraceMismatch, NumericalBreakdown)


@dataclasses.dataclass(eq=False)
class DecompositionNode:
    """One sub-problem of the recursion.

    Leaves carry ``evidence``; split nodes carry ``step``, ``pair`` and two
    children whose sizes match ``step.sizes``.
    """

    depth: int
    size: int
    center_dim: int
    path: str = ""
    restricted_dim: int | None = None
    evidence: Evidence | None = None
    tries: int = 0
    step: TransformStep | None = None
    pair: IdempotentPair | None = None
    left: "DecompositionNode | None" = None
    right: "DecompositionNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.step is None

    def leaves(self):
        if self.is_leaf:
            yield self
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()

    def nodes(self):
        yield self
        if not self.is_leaf:
            yield from self.left.nodes()
            yield from self.right.nodes()


@dataclasses.dataclass(eq=False)
class Decomposition:
    P: np.ndarray
    block_sizes: list[int]
    blocks: list[list[np.ndarray]]
    tree: DecompositionNode
    mode: Mode
    residuals: dict
    certified_finest: bool

    @property
    def sorted_sizes(self) -> list[int]:
        return sorted(self.block_sizes)

    @property
    def t(self) -> int:
        return len(self.block_sizes)

    @property
    def is_diagonal(self) -> bool:
        return all(s == 1 for s in self.block_sizes)

    def transformed(self, A: np.ndarray, kind: SymmetryKind) -> np.ndarray:
        return adjoint(self.P, kind) @ A @ self.P


def child_seed(seed: int, path: str) -> int:
    """Deterministic per-node seed from the root seed and the tree path."""
    digest = hashlib.sha256(f"{seed}:{path}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _split_once(mset, cb, mode, cfg, rng, skip_scan):
    outcome = find_split(cb, mode, cb.coeff_field, cfg, rng=rng, skip_scan=skip_scan)
    if not outcome.found:
        return outcome, None
    step = build_transform(outcome.pair, mode, cfg)
    transformed = apply_congruence(step.P, mset, mode)
    left, right, res = extract_blocks(transformed, step.sizes, cfg)
    step = dataclasses.replace(step, off_block_residual=res)
    return outcome, (step, left, right)


def _decompose(mset: MatrixSet, mode: Mode, cfg: SolverConfig, path: str,
               depth: int, max_depth: int):
    if depth > max_depth:
        raise DepthExceeded(f"recursion depth {depth} exceeds {max_depth}")
    mset = validate_matrix_set(mset, cfg)
    n = mset.n
    cb = center_basis(mset, cfg)
    node = DecompositionNode(depth=depth, size=n, center_dim=cb.dim, path=path)
    rng = np.random.default_rng(child_seed(cfg.seed, path))

    result = None
    outcome = None
    for attempt in range(2):
        try:
            outcome, result = _split_once(mset, cb, mode, cfg, rng, skip_scan=attempt > 0)
            break
        except _SPLIT_FAILURES as exc:
            logger.info("split at node %r failed (%s); %s", path or "root", exc,
                        "retrying" if attempt == 0 else "giving up")
    if outcome is not None:
        node.restricted_dim = outcome.restricted_dim
        node.tries = outcome.tries
    if result is None:
        node.evidence = outcome.evidence if outcome is not None else Evidence.BUDGET_EXHAUSTED
        return node, np.eye(n, dtype=np.complex128), [[A] for A in mset.matrices], [n]

    step, left, right = result
    node.step, node.pair = step, outcome.pair
    node.left, Pl, bl, sl = _decompose(left, mode, cfg, path + "0", depth + 1, max_depth)
    node.right, Pr, br, sr = _decompose(right, mode, cfg, path + "1", depth + 1, max_depth)
    P = step.P @ scipy.linalg.block_diag(Pl, Pr)
    blocks = [a + b for a, b in zip(bl, br)]
    return node, P, blocks, sl + sr


def sbdc(mset: MatrixSet, mode: Mode | str = Mode.CONGRUENCE,
         cfg: SolverConfig | None = None) -> Decomposition:
    """Finest simultaneous block diagonalization of ``mset`` under ``mode``.

    The returned ``P`` satisfies P^op A_i P = blockdiag(blocks[i]) where
    P^op is P^T for symmetric sets and P^* for Hermitian sets.
    """
    cfg = cfg or SolverConfig()
    mset = validate_matrix_set(mset, cfg)
    mode = check_mode(mset, mode)
    max_depth = cfg.max_depth if cfg.max_depth is not None else mset.n
    tree, P, blocks, sizes = _decompose(mset, mode, cfg, "", 0, max_depth)
    if mset.is_real:
        P = P.real.astype(np.complex128)
    dec = Decomposition(P=P, block_sizes=sizes, blocks=blocks, tree=tree, mode=mode,
                        residuals={}, certified_finest=all(
                            leaf.evidence is Evidence.DIM_ONE for leaf in tree.leaves()))
    dec.residuals = _residuals(dec, mset)
    return dec


def _residuals(dec: Decomposition, mset: MatrixSet) -> dict:
    off, sym = 0.0, 0.0
    for A, blocks in zip(mset.matrices, dec.blocks):
        o = off_block_norm(dec.transformed(A, mset.kind), dec.block_sizes)
        nrm = np.linalg.norm(A)
        off = max(off, o / nrm if nrm > 0 else o)
        for blk in blocks:
            sym = max(sym, symmetry_residual(blk, mset.kind))
    res = {"max_off_block": off, "max_symmetry": sym}
    splits = [nd for nd in dec.tree.nodes() if not nd.is_leaf]
    res["max_idempotent"] = max((max(nd.pair.idem_residual, nd.pair.orth_residual)
                                 for nd in splits), default=0.0)
    res["max_membership"] = max((nd.pair.member_residual for nd in splits), default=0.0)
    if dec.mode.restricted:
        n = dec.P.shape[0]
        res["transform_orthogonality"] = float(np.linalg.norm(dec.P.conj().T @ dec.P - np.eye(n)))
    return res


@dataclasses.dataclass
class Check:
    name: str
    passed: bool
    value: float
    bound: float | None = None


@dataclasses.dataclass
class VerificationReport:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def verify(dec: Decomposition, original: MatrixSet,
           cfg: SolverConfig | None = None) -> VerificationReport:
    """Recompute everything about ``dec`` from scratch and report per check."""
    cfg = cfg or SolverConfig()
    kind = original.kind
    P = np.asarray(dec.P, dtype=np.complex128)
    n = original.n
    sizes = list(dec.block_sizes)
    checks = []

    checks.append(Check("sizes_sum", sum(sizes) == n and all(s >= 1 for s in sizes),
                        float(sum(sizes)), float(n)))
    cond = float(np.linalg.cond(P)) if P.shape == (n, n) else np.inf
    checks.append(Check("invertible", bool(cond <= 1 / cfg.tol_rank), cond, 1 / cfg.tol_rank))

    off = 0.0
    block_err = 0.0
    blocks_ok = len(dec.blocks) == original.m
    sym = 0.0
    for i, A in enumerate(original.matrices):
        B = adjoint(P, kind) @ A @ P
        nrm = np.linalg.norm(A)
        o = off_block_norm(B, sizes) if sum(sizes) == n else np.inf
        off = max(off, o / nrm if nrm > 0 else o)
        if blocks_ok:
            stored = dec.blocks[i]
            if [b.shape[0] for b in stored] != sizes:
                blocks_ok = False
                continue
            start = 0
            for blk in stored:
                s = blk.shape[0]
                block_err = max(block_err, np.linalg.norm(B[start:start + s, start:start + s] - blk)
                                / max(1.0, nrm))
                sym = max(sym, symmetry_residual(blk, kind))
                start += s
    checks.append(Check("off_block", off <= cfg.tol_block, float(off), cfg.tol_block))
    checks.append(Check("blocks_match", blocks_ok and block_err <= cfg.tol_block,
                        float(block_err) if blocks_ok else np.inf, cfg.tol_block))
    checks.append(Check("block_symmetry", sym <= cfg.tol_sym, float(sym), cfg.tol_sym))
    if Mode(dec.mode).restricted:
        orth = float(np.linalg.norm(P.conj().T @ P - np.eye(n)))
        checks.append(Check("orthogonality", orth <= cfg.tol_idem, orth, cfg.tol_idem))
    leaf_sizes = [leaf.size for leaf in dec.tree.leaves()]
    checks.append(Check("tree_consistent", leaf_sizes == sizes, float(len(leaf_sizes)),
                        float(len(sizes))))
    if dec.certified_finest:
        honest = all(leaf.evidence is Evidence.DIM_ONE for leaf in dec.tree.leaves())
        checks.append(Check("certificate", honest, float(honest), 1.0))
    return VerificationReport(checks)


@dataclasses.dataclass
class CommutationReport:
    commute: bool
    max_commutator_norm: float
    worst_pair: tuple[int, int] | None
    commutator: np.ndarray | None


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def commutation_check(mset: MatrixSet, tol: float | None = None) -> CommutationReport:
    """Largest normalized commutator ||A_i A_j - A_j A_i|| / (||A_i|| ||A_j||).

    Pairwise commutation is necessary for unitary simultaneous
    diagonalization of Hermitian matrices.
    """
    tol = SolverConfig().tol_idem if tol is None else tol
    worst, pair, comm = 0.0, None, None
    for i, j in itertools.combinations(range(mset.m), 2):
        A, B = mset.matrices[i], mset.matrices[j]
        denom = np.linalg.norm(A) * np.linalg.norm(B)
        if denom == 0:
            continue
        C = commutator(A, B)
        val = float(np.linalg.norm(C) / denom)
        if pair is None or val > worst:
            worst, pair, comm = val, (i, j), C
    return CommutationReport(worst <= tol, worst, pair, comm)


def block_signature_refines(found, planted) -> bool:
    """True if the multiset ``found`` can be grouped to sum to each entry of ``planted``."""
    found = sorted(found, reverse=True)
    targets = sorted(planted, reverse=True)
    if sum(found) != sum(targets):
        return False

    def place(k, remaining):
        if k == len(found):
            return all(r == 0 for r in remaining)
        seen = set()
        for j, r in enumerate(remaining):
            if r >= found[k] and r not in seen:
                seen.add(r)
                remaining[j] -= found[k]
                if place(k + 1, remaining):
                    return True
                remaining[j] += found[k]
        return False

    return place(0, list(targets))
