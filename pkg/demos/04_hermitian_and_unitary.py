"""Hermitian families: *-congruence and unitary *-congruence.

The center of a Hermitian family is a real vector space. A commutation check
is a quick necessary test for full unitary diagonalization.
"""
import numpy as np

from sbdc import center_basis, commutation_check, sbdc
from sbdc.fixtures import HERMITIAN_BLOCK, HERMITIAN_DIAGONAL, UNITARY_BLOCK

np.set_printoptions(precision=4, suppress=True)

ms = HERMITIAN_DIAGONAL.matrix_set()
rep = commutation_check(ms)
A1, A2 = ms.matrices[0], ms.matrices[1]
print(f"A1 A2 =\n{A1 @ A2}\nA2 A1 =\n{A2 @ A1}")
print(f"commute: {rep.commute} (max normalized commutator {rep.max_commutator_norm:.3f})")
dec = sbdc(ms, "star")
print(f"*-congruence still diagonalizes: {dec.sorted_sizes}")
for i, blocks in enumerate(dec.blocks, 1):
    print(f"  P^* A{i} P diagonal = {[round(b[0, 0].real, 6) for b in blocks]}")

ms = HERMITIAN_BLOCK.matrix_set()
cb = center_basis(ms)
print(f"\nHermitian family with a 1+2 structure: real center dim {cb.dim}")
print(f"  star: {sbdc(ms, 'star').sorted_sizes}, unitary: {sbdc(ms, 'unitary').sorted_sizes}")

ms = UNITARY_BLOCK.matrix_set()
dec = sbdc(ms, "unitary")
print(f"\nunitary mode: {dec.sorted_sizes}, "
      f"P^* P - I = {np.linalg.norm(dec.P.conj().T @ dec.P - np.eye(3)):.1e}, "
      f"certified finest {dec.certified_finest}")
