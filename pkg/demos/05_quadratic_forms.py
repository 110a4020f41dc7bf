"""From quadratic forms to blocks and back.

A form q(x) = x^T A x is parsed into its symmetric matrix; after the
decomposition each form becomes a sum of forms in disjoint variable groups.
"""
import numpy as np

from sbdc import format_quadratic_form, parse_quadratic_forms, sbdc

forms = """
# three forms in three variables
x1^2 - x2^2 + 2*x2*x3 + 2*x3^2
2*x1*x2 - 2*x1*x3 - x2^2 + 2*x2*x3 + x3^2
2*x1^2 + 2*x1*x2 - 2*x1*x3 - 3*x2^2 + 6*x2*x3 - 2*x3^2
"""
ms = parse_quadratic_forms(forms)
for A in ms.matrices:
    print(f"{format_quadratic_form(A.real):45s} <- {A.real.tolist()}")

dec = sbdc(ms, "congruence")
print(f"\nblock sizes {dec.block_sizes}; in the new variables y with x = P y:")
for A in ms.matrices:
    B = dec.transformed(A, ms.kind).real
    B[np.abs(B) < 1e-12] = 0
    print("  " + format_quadratic_form(B.round(10), ["y1", "y2", "y3"]))
