"""Small worked matrix families with known block structure.

Each entry records the matrices, the symmetry kind, the field, the natural
mode and the known finest block signature (sorted). They double as
regression fixtures and as demo inputs.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .core import MatrixSet, Mode, SolverConfig, make_matrix_set

j = 1j


@dataclasses.dataclass(frozen=True)
class Fixture:
    name: str
    matrices: tuple
    kind: str
    field: str
    mode: Mode
    signature: tuple[int, ...]

    def matrix_set(self, field: str | None = None, cfg: SolverConfig | None = None) -> MatrixSet:
        return make_matrix_set([np.array(A) for A in self.matrices], self.kind,
                               field or self.field, cfg)


def _fx(name, mats, kind, field, mode, signature):
    return Fixture(name, tuple(mats), kind, field, Mode(mode), tuple(signature))


# real pair, simultaneously diagonalizable by congruence but not orthogonally
REAL_PAIR = _fx("real_pair", [
    [[-2, 2, -2], [2, 2, 0], [-2, 0, -1]],
    [[5, 7, -1], [7, 5, 1], [-1, 1, -1]],
], "symmetric", "real", "congruence", [1, 1, 1])

# 1+2 over the reals, fully diagonal over the complexes
FIELD_DEPENDENT = _fx("field_dependent", [
    [[1, 0, 0], [0, -1, 1], [0, 1, 2]],
    [[0, 1, -1], [1, -1, 1], [-1, 1, 1]],
    [[2, 1, -1], [1, -3, 3], [-1, 3, -2]],
], "symmetric", "real", "congruence", [1, 2])

# the 2x2 block has a center with a nilpotent element, so it cannot split
NILPOTENT_CENTER = _fx("nilpotent_center", [
    [[1, 2, 3], [2, 8, 16], [3, 16, 33]],
    [[1, 2, 3], [2, 6, 12], [3, 12, 25]],
    [[1, 2, 3], [2, 7, 16], [3, 16, 37]],
], "symmetric", "complex", "congruence", [1, 2])

ORTHOGONAL_BLOCK = _fx("orthogonal_block", [
    [[-9, 4, 12], [4, 10, 3], [12, 3, -16]],
    [[16, 8, 12], [8, 5, 6], [12, 6, 9]],
    [[41, -4, 12], [-4, 20, -3], [12, -3, 34]],
], "symmetric", "real", "orthogonal", [1, 2])

HERMITIAN_DIAGONAL = _fx("hermitian_diagonal", [
    [[1, 1 + j], [1 - j, 1]],
    [[2, 2 + 2 * j], [2 - 2 * j, 7]],
    [[-2, -2 - 2 * j], [-2 + 2 * j, 1]],
], "hermitian", "complex", "star", [1, 1])

HERMITIAN_BLOCK = _fx("hermitian_block", [
    [[0, -2 - 2 * j, -3 - 2 * j], [-2 + 2 * j, -2, 4 + 6 * j], [-3 + 2 * j, 4 - 6 * j, 11]],
    [[-2, -2 - 5 * j, -3 - j], [-2 + 5 * j, -3, 11 + 6 * j], [-3 + j, 11 - 6 * j, 19]],
], "hermitian", "complex", "star", [1, 2])

UNITARY_BLOCK = _fx("unitary_block", [
    [[9, -6 * j, 3 * j], [6 * j, 9, -6 * j], [-3 * j, 6 * j, 9]],
    [[-4, -2, 5], [-2, 8, -2], [5, -2, -4]],
    [[15, -6, 6], [-6, 6, 12], [6, 12, 6]],
], "hermitian", "complex", "unitary", [1, 2])

FIXTURES = {fx.name: fx for fx in (REAL_PAIR, FIELD_DEPENDENT, NILPOTENT_CENTER,
                                    ORTHOGONAL_BLOCK, HERMITIAN_DIAGONAL,
                                    HERMITIAN_BLOCK, UNITARY_BLOCK)}


def planted_set(rng: np.random.Generator, n: int, m: int, sizes, kind: str = "symmetric",
                max_cond: float = 100.0):
    """Random block-diagonal family hidden by a random congruence.

    Returns ``(MatrixSet, Q)`` with A_i = Q^op D_i Q and D_i block diagonal
    with the given ``sizes``. The singular values of Q lie in [1, max_cond].
    """
    from scipy.linalg import block_diag
    from scipy.stats import ortho_group, unitary_group

    herm = kind == "hermitian"
    mats = []
    for _ in range(m):
        blocks = []
        for s in sizes:
            G = rng.standard_normal((s, s))
            if herm:
                G = G + 1j * rng.standard_normal((s, s))
            blocks.append((G + G.conj().T) / 2 if herm else (G + G.T) / 2)
        mats.append(block_diag(*blocks))
    group = unitary_group if herm else ortho_group
    if n == 1:
        U = V = np.eye(1)
    else:
        U = group.rvs(n, random_state=rng)
        V = group.rvs(n, random_state=rng)
    sv = np.exp(rng.uniform(0, np.log(max_cond), n))
    sv[0], sv[-1] = 1.0, max_cond
    Q = U @ np.diag(sv / max_cond ** 0.5) @ V
    Qop = Q.conj().T if herm else Q.T
    out = [Qop @ D @ Q for D in mats]
    return make_matrix_set(out, kind, "complex" if herm else "real"), Q
