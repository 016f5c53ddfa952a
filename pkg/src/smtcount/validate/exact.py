from __future__ import annotations

import numpy as np

from .. import bvformula as bv
from ..bvformula.evaluate import decode_indices, eval_bool
from ..oracle import MAX_ENUM_BITS, SpaceTooLarge

_CHUNK = 1 << 20


def exact_count(f: bv.Formula) -> int:
    """Number of models of ``f`` by evaluating every assignment."""
    bits = f.total_bits
    if bits > MAX_ENUM_BITS:
        raise SpaceTooLarge(f"assignment space 2**{bits} exceeds 2**{MAX_ENUM_BITS}")
    total = 0
    for lo in range(0, 1 << bits, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, 1 << bits), dtype=np.uint64)
        total += int(np.count_nonzero(eval_bool(f.body, decode_indices(f, idx), len(idx))))
    return total
