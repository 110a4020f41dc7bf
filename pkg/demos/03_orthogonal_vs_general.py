"""Orthogonal congruence keeps only the symmetric part of the center.

With P restricted to orthogonal matrices, only symmetric idempotents may be
used. Some families lose all splits, others keep a few.
"""
import numpy as np

from sbdc import center_basis, restrict_center, sbdc
from sbdc.fixtures import ORTHOGONAL_BLOCK, REAL_PAIR

np.set_printoptions(precision=4, suppress=True)

ms = ORTHOGONAL_BLOCK.matrix_set()
dec = sbdc(ms, "orthogonal")
print("orthogonal mode on a family with a hidden 1+2 structure")
print(f"  block sizes {dec.sorted_sizes}, P^T P - I = {np.linalg.norm(dec.P.T @ dec.P - np.eye(3)):.1e}")
for i, blocks in enumerate(dec.blocks, 1):
    print(f"  blocks of A{i}: {[b.real.round(6).tolist() for b in blocks]}")

ms = REAL_PAIR.matrix_set()
cb = center_basis(ms)
sym = restrict_center(cb, "orthogonal")
print("\na pair that congruence fully diagonalizes")
print(f"  center dim {cb.dim}, symmetric part dim {sym.dim}")
print(f"  congruence: {sbdc(ms, 'congruence').sorted_sizes}")
print(f"  orthogonal: {sbdc(ms, 'orthogonal').sorted_sizes}")
# both matrices annihilate v, so v spans a block even for orthogonal P
v = np.array([-1.0, 1.0, 2.0])
print(f"  common null vector v = {v}: A1 v = {ms.matrices[0].real @ v}, A2 v = {ms.matrices[1].real @ v}")
