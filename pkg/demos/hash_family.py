"""
Word-level hashing of bit-vectors
=================================

Cut two 8-bit words into slices, hash them modulo a prime, and look at how
evenly the cells fill up.
"""

import random
from collections import Counter

import numpy as np

from smtcount import bvformula as bv
from smtcount.hashfamily import encode_constraint, eval_hash, make_config, sample_cell, sample_hash, slice_layout

# Two words of width 8.  Level 0 hashes whole words mod 257, level 1 hashes
# 4-bit halves mod 17, and so on down to single bits mod 2.
cfg = make_config(2, 8, (0, 1))
for level, p in enumerate(cfg.primes):
    print(f"level {level}: slices {[ (s.var_index, s.lo, s.hi) for s in slice_layout(cfg, level)]}  p={p.value}")

# One component at level 1: four nibbles, four coefficients, one offset.
rng = random.Random(1)
h = sample_hash(cfg, rng)
comp = h.components[0]
print("coefficients", comp.coeffs, "offset", comp.offset, "modulus", comp.modulus.value)

# Hash every one of the 65536 assignments at once.
x, y = np.meshgrid(np.arange(256), np.arange(256), indexing="ij")
(cells,) = eval_hash(h, [x.ravel(), y.ravel()])
sizes = Counter(np.asarray(cells, dtype=np.int64).tolist())
print("cell sizes:", sorted(sizes.values()))
print("ideal     :", 65536 / 17)

# The same constraint as a bit-vector formula, ready for any SMT solver.
support = [bv.Variable("x", 8), bv.Variable("y", 8)]
cell = sample_cell(h, rng)
f = bv.Formula.build(support, encode_constraint(h, cell, support))
print(bv.print_smt2(f))

# Fresh hashes scatter a fixed input uniformly over the 17 cells.
hits = Counter(eval_hash(sample_hash(cfg, rng), [0xAB, 0x3C])[0] for _ in range(17_000))
print("hits per cell over 17000 hashes:", [hits[a] for a in range(17)])
