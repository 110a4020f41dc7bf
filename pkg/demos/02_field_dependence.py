"""The same family splits further over C than over R.

The 2x2 sub-block that survives over the reals has a two-dimensional center
whose generic element has a complex-conjugate eigenvalue pair. Over R the
pair cannot be separated; over C it can.
"""
import numpy as np

from sbdc import center_basis, make_matrix_set, sbdc
from sbdc.fixtures import FIELD_DEPENDENT

np.set_printoptions(precision=4, suppress=True)

for field in ("real", "complex"):
    ms = FIELD_DEPENDENT.matrix_set(field)
    dec = sbdc(ms, "congruence")
    print(f"over {field}: block sizes {dec.sorted_sizes}, certified {dec.certified_finest}")
    for leaf in dec.tree.leaves():
        print(f"  leaf {leaf.path or 'root'}: size {leaf.size}, center dim {leaf.center_dim}, "
              f"evidence {leaf.evidence.value}")

# look at the 2x2 survivor over R
dec = sbdc(FIELD_DEPENDENT.matrix_set("real"), "congruence")
big = [k for k, s in enumerate(dec.block_sizes) if s == 2][0]
sub = make_matrix_set([blocks[big].real for blocks in dec.blocks])
cb = center_basis(sub)
Y = cb.element(np.random.default_rng(0).standard_normal(cb.dim))
print(f"\neigenvalues of a random element of the 2x2 center: {np.linalg.eigvals(Y)}")
