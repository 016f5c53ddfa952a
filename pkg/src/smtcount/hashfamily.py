"""The word-level hash family H_SMT(n, k, C).

Each of the ``n`` width-``k`` words is cut into slices; level ``j`` uses
slices of width ``ceil(k / 2**j)`` and works modulo ``p_j``, the smallest
prime ``>= 2**width``.  A hash function is a tuple of linear forms
``(sum a_m * X_m + b) mod p_j``, ``C[j]`` of them at level ``j``.

Levels run down to one-bit slices (``p = 2``), where a component is a
random XOR constraint.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce
from operator import mul
from typing import Mapping, Sequence

import numpy as np

from . import bvformula as bv
from .modmath import Prime, mod_linear_eval, smallest_prime_geq


@dataclass(frozen=True)
class SliceRef:
    var_index: int
    lo: int
    hi: int

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1


def num_levels(k: int) -> int:
    """Slicing levels for width ``k``: widths k, ceil(k/2), ..., 1."""
    return math.ceil(math.log2(k)) + 1 if k > 1 else 1


def slice_width(k: int, level: int) -> int:
    return -(-k // (1 << level))


@dataclass(frozen=True)
class HashConfig:
    n: int
    k: int
    C: tuple[int, ...]
    primes: tuple[Prime, ...]

    @property
    def levels(self) -> int:
        return len(self.primes)

    def num_cells(self) -> int:
        """Exact number of cells, prod_j p_j ** C[j]."""
        return reduce(mul, (p.value**c for p, c in zip(self.primes, self.C)), 1)

    def with_counts(self, C: Sequence[int]) -> "HashConfig":
        return make_config(self.n, self.k, C)


_PRIME_CACHE: dict[int, Prime] = {}


def level_prime(k: int, level: int) -> Prime:
    w = slice_width(k, level)
    if w not in _PRIME_CACHE:
        _PRIME_CACHE[w] = smallest_prime_geq(1 << w)
    return _PRIME_CACHE[w]


def make_config(n: int, k: int, C: Sequence[int]) -> HashConfig:
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    C = tuple(int(c) for c in C)
    if not C:
        raise ValueError("C must be non-empty")
    if any(c < 0 for c in C):
        raise ValueError(f"C entries must be nonnegative: {C}")
    if len(C) > num_levels(k):
        raise ValueError(f"C has {len(C)} levels but width {k} only has {num_levels(k)}")
    C = C + (0,) * (num_levels(k) - len(C))
    primes = tuple(level_prime(k, j) for j in range(num_levels(k)))
    return HashConfig(n, k, C, primes)


def slice_layout(config: HashConfig, level: int) -> tuple[SliceRef, ...]:
    """Slices of every variable at ``level``, variable-major, low bits first.

    When ``k`` is not a multiple of the slice width the last slice of each
    word is truncated to the remaining bits; slices that would start past
    bit ``k - 1`` are dropped.
    """
    if not 0 <= level < config.levels:
        raise ValueError(f"level {level} out of range")
    k = config.k
    w = slice_width(k, level)
    out = []
    for i in range(config.n):
        for lo in range(0, k, w):
            out.append(SliceRef(i, lo, min(lo + w, k) - 1))
    return tuple(out)


@dataclass(frozen=True)
class HashComponent:
    level: int
    modulus: Prime
    slices: tuple[SliceRef, ...]
    coeffs: tuple[int, ...]
    offset: int


@dataclass(frozen=True)
class HashFunction:
    config: HashConfig
    components: tuple[HashComponent, ...]

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(c.modulus.value for c in self.components)


@dataclass(frozen=True)
class Cell:
    target: tuple[int, ...]


def sample_hash(config: HashConfig, rng: random.Random) -> HashFunction:
    # randrange draws by rejection on getrandbits, so residues carry no modulo bias
    comps = []
    for level, count in enumerate(config.C):
        if not count:
            continue
        p = config.primes[level]
        layout = slice_layout(config, level)
        for _ in range(count):
            coeffs = tuple(rng.randrange(p.value) for _ in layout)
            comps.append(HashComponent(level, p, layout, coeffs, rng.randrange(p.value)))
    return HashFunction(config, tuple(comps))


def sample_cell(h: HashFunction, rng: random.Random) -> Cell:
    return Cell(tuple(rng.randrange(c.modulus.value) for c in h.components))


def _slice_values(h: HashFunction, comp: HashComponent, values: Sequence):
    out = []
    for s in comp.slices:
        v = values[s.var_index]
        out.append((v >> s.lo) & ((1 << s.width) - 1))
    return out


def eval_hash(h: HashFunction, assignment) -> tuple:
    """Hash value of an assignment.

    ``assignment`` is either a sequence of ``n`` word values (in support
    order) or a mapping from support names to values, in which case the
    names are taken from insertion order.  Values may be ints or numpy
    integer arrays (elementwise evaluation).
    """
    values = list(assignment.values()) if isinstance(assignment, Mapping) else list(assignment)
    n, k = h.config.n, h.config.k
    if len(values) != n:
        raise ValueError(f"expected {n} words, got {len(values)}")
    for v in values:
        if isinstance(v, int) and not 0 <= v < (1 << k):
            raise bv.WidthError(f"value {v} does not fit width {k}")
    if any(not isinstance(v, int) for v in values):
        values = [v if isinstance(v, int) else np.asarray(v).astype(object) for v in values]
    return tuple(
        mod_linear_eval(c.coeffs, _slice_values(h, c, values), c.offset, c.modulus) for c in h.components
    )


def accumulator_width(p: Prime, terms: int) -> int:
    """Width that holds sum of ``terms`` products of residues plus an offset."""
    return 2 * p.bits + math.ceil(math.log2(terms + 1))


def encode_component(comp: HashComponent, target: int, variables: Sequence[bv.Term]) -> bv.BoolExpr:
    p = comp.modulus
    W = accumulator_width(p, len(comp.slices))
    cw = p.bits
    acc = bv.zero_extend(bv.const(comp.offset, cw), W - cw)
    for s, a in zip(comp.slices, comp.coeffs):
        x = bv.zero_extend(bv.extract(variables[s.var_index], s.lo, s.hi), W - s.width)
        acc = bv.bvadd(acc, bv.bvmul(bv.zero_extend(bv.const(a, cw), W - cw), x))
    return bv.eq(bv.bvurem(acc, bv.const(p.value, W)), bv.const(target, W))


def encode_constraint(h: HashFunction, cell: Cell, support: Sequence[bv.Variable]) -> bv.BoolExpr:
    """Formula for ``h(X) = cell.target`` over the width-k ``support``."""
    if len(cell.target) != len(h.components):
        raise ValueError("cell and hash function have different arity")
    if len(support) != h.config.n or any(v.width != h.config.k for v in support):
        raise bv.WidthError("support does not match the hash configuration")
    xs = [bv.var_of(v) for v in support]
    return bv.and_(*(encode_component(c, a, xs) for c, a in zip(h.components, cell.target)))
