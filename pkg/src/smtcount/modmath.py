"""Primes and exact modular arithmetic for the word-level hash family."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Deterministic for every n < 3.3e24, which covers smallest_prime_geq(2**64).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MAX_QUERY = 1 << 64


@dataclass(frozen=True)
class Prime:
    value: int

    @property
    def bits(self) -> int:
        """Bits needed to hold any residue, i.e. ceil(log2 value)."""
        return (self.value - 1).bit_length()

    def __int__(self) -> int:
        return self.value


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def smallest_prime_geq(n: int) -> Prime:
    """Least prime p >= n. Bertrand's postulate guarantees p < 2n."""
    if n < 2 or n > _MAX_QUERY:
        raise ValueError(f"smallest_prime_geq: {n} outside [2, 2**64]")
    p = n
    while not is_prime(p):
        p += 1
    return Prime(p)


def mod_linear_eval(coeffs: Sequence[int], values: Sequence, offset: int, p: int | Prime):
    """(sum(coeffs[i] * values[i]) + offset) mod p, computed exactly.

    ``values`` may hold Python ints or numpy integer arrays; arrays are
    promoted to object dtype whenever a product could leave int64.
    """
    p = int(p)
    if len(coeffs) != len(values):
        raise ValueError(f"{len(coeffs)} coefficients for {len(values)} values")
    if not 0 <= offset < p:
        raise ValueError(f"offset {offset} not in Z_{p}")
    acc = offset
    for c, v in zip(coeffs, values):
        if not 0 <= c < p:
            raise ValueError(f"coefficient {c} not in Z_{p}")
        acc = (acc + c * _exact(v, p)) % p
    return acc


def _exact(v, p: int):
    if isinstance(v, int):
        return v
    v = np.asarray(v)
    if p.bit_length() * 2 + 1 < 63:
        # residues and products both stay below 2**62
        return v.astype(np.int64) % p
    return v.astype(object) % p
