"""Empirical checks of the hash family's uniformity and pairwise independence."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from statistics import NormalDist
from typing import Sequence

from ..hashfamily import HashConfig, eval_hash, make_config, sample_hash

BASE_Z = 4.0


def bonferroni_z(bins: int, base_z: float = BASE_Z) -> float:
    """Per-bin two-sided z threshold keeping the family-wise false-alarm rate
    at that of a single ``base_z`` test."""
    nd = NormalDist()
    alpha = 2 * (1 - nd.cdf(base_z))
    return nd.inv_cdf(1 - alpha / (2 * bins))


@dataclass(frozen=True)
class LawCheck:
    law: str
    bins: int
    expected: float
    max_z: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.max_z <= self.threshold


def _z(count: int, trials: int, q: float) -> float:
    se = math.sqrt(q * (1 - q) / trials)
    return abs(count / trials - q) / se


def cells(config: HashConfig) -> list[tuple[int, ...]]:
    ranges = []
    for p, c in zip(config.primes, config.C):
        ranges.extend([range(p.value)] * c)
    return list(product(*ranges))


def check_uniformity(config: HashConfig, x: Sequence[int], trials: int, rng: random.Random) -> LawCheck:
    counts = Counter(eval_hash(sample_hash(config, rng), x) for _ in range(trials))
    domain = cells(config)
    q = float(Fraction(1, config.num_cells()))
    zmax = max(_z(counts[a], trials, q) for a in domain)
    return LawCheck("uniformity", len(domain), q, zmax, bonferroni_z(len(domain)))


def check_pairwise(
    config: HashConfig, x1: Sequence[int], x2: Sequence[int], trials: int, rng: random.Random
) -> tuple[LawCheck, LawCheck]:
    """Joint law of (h(x1), h(x2)) and the collision rate, for distinct x1, x2."""
    if list(x1) == list(x2):
        raise ValueError("pairwise check needs distinct inputs")
    joint = Counter()
    for _ in range(trials):
        h = sample_hash(config, rng)
        joint[eval_hash(h, x1), eval_hash(h, x2)] += 1
    domain = cells(config)
    q = float(Fraction(1, config.num_cells() ** 2))
    zmax = max(_z(joint[a, b], trials, q) for a in domain for b in domain)
    bins = len(domain) ** 2
    joint_check = LawCheck("pairwise", bins, q, zmax, bonferroni_z(bins))
    collisions = sum(c for (a, b), c in joint.items() if a == b)
    qc = float(Fraction(1, config.num_cells()))
    coll_check = LawCheck("collision", 1, qc, _z(collisions, trials, qc), bonferroni_z(1))
    return joint_check, coll_check


def hash_law_suite(configs: Sequence[tuple[int, int, Sequence[int]]], trials: int = 100_000, seed: int = 0):
    """Uniformity, pairwise and collision checks for each ``(n, k, C)``.

    Inputs are fixed per config: ``x1`` is all ones-pattern words and ``x2``
    differs from it in the last word.
    """
    rng = random.Random(seed)
    out = []
    for n, k, C in configs:
        config = make_config(n, k, C)
        if config.num_cells() > 1000:
            raise ValueError(f"config {n, k, C} has more than 1000 cells")
        top = (1 << k) - 1
        x1 = [(0b1010_1010_1010 >> i) & top for i in range(n)]
        x2 = x1[:-1] + [(x1[-1] + 1) & top]
        out.append(((n, k, tuple(C)), check_uniformity(config, x1, trials, rng), *check_pairwise(config, x1, x2, trials, rng)))
    return out
