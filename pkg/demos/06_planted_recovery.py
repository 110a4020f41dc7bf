"""Recovering a block structure hidden by a random congruence.

Block-diagonal families are mixed by a random P with cond(P) <= 100 and
handed to the solver, which should find blocks at least as fine.
"""
import time

import numpy as np

from sbdc import sbdc, verify
from sbdc.driver import block_signature_refines
from sbdc.fixtures import planted_set

rng = np.random.default_rng(1)
hits, total, slowest = 0, 60, 0.0
finer = 0
for t in range(total):
    n = int(rng.integers(2, 9))
    cuts = sorted(rng.choice(np.arange(1, n), size=int(rng.integers(1, n)), replace=False))
    sizes = [int(s) for s in np.diff([0, *cuts, n])]
    kind = "hermitian" if t % 2 else "symmetric"
    ms, _ = planted_set(rng, n, 2, sizes, kind)
    start = time.perf_counter()
    dec = sbdc(ms, "star" if kind == "hermitian" else "congruence")
    slowest = max(slowest, time.perf_counter() - start)
    ok = block_signature_refines(dec.sorted_sizes, sizes) and verify(dec, ms).passed
    hits += ok
    finer += ok and len(dec.block_sizes) > len(sizes)
    if t < 6:
        print(f"planted {sorted(sizes)} ({kind}) -> found {dec.sorted_sizes}")
print(f"\n{hits}/{total} recovered, {finer} split finer than planted "
      f"(random blocks of size 2+ can themselves split), slowest {slowest * 1e3:.1f} ms")
