"""The center of a matrix family and its Jordan product.

For symmetric A_1..A_m the center is every X with A_i X symmetric. It always
holds the scalars, it is closed under X, Y -> (XY + YX)/2, and its
idempotents are what split the family into blocks.
"""
import numpy as np

from sbdc import center_basis, jordan_product, make_matrix_set, membership_residual
from sbdc.fixtures import REAL_PAIR

np.set_printoptions(precision=4, suppress=True)

ms = REAL_PAIR.matrix_set()
for i, A in enumerate(ms.matrices, 1):
    print(f"A{i} =\n{A.real}\n")

cb = center_basis(ms)
print(f"center dimension: {cb.dim}")
print(f"identity in the center, residual {membership_residual(cb, np.eye(3)):.1e}")

# the stored basis is orthonormal in the Frobenius inner product
worst = 0.0
for X in cb.basis:
    for Y in cb.basis:
        worst = max(worst, membership_residual(cb, jordan_product(X, Y)))
print(f"worst membership residual over all Jordan products: {worst:.1e}")

# ordinary products need not stay inside: for {I} the center is all
# symmetric matrices, and XY of two symmetric matrices is rarely symmetric
sym = center_basis(make_matrix_set([np.eye(3)]))
X, Y = sym.basis[0], sym.basis[1]
print(f"\ncenter of {{I_3}}: dim {sym.dim}")
print(f"  XY residual {membership_residual(sym, X @ Y):.3f}, "
      f"Jordan product residual {membership_residual(sym, jordan_product(X, Y)):.1e}")

# an idempotent in the center: the projector along a common null vector
v = np.array([-1.0, 1.0, 2.0])
print(f"\nA1 v = {ms.matrices[0].real @ v}, A2 v = {ms.matrices[1].real @ v}")
E = np.outer(v, v) / (v @ v)
print(f"projector onto v lies in the center, residual {membership_residual(cb, E):.1e}")
