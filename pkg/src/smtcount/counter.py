"""Approximate model counting with word-level hashing.

``approx_mc`` runs ``t`` independent ``approx_mc_core`` invocations and
returns the median of the successful ones.  Each core invocation looks for
a hash configuration whose random cell holds between 1 and ``pivot``
models and scales the cell size by the number of cells.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import bvformula as bv
from .hashfamily import encode_constraint, make_config, num_levels, sample_cell, sample_hash
from .oracle import BoundedResult, OracleConfig, SolverTimeout, make_oracle

log = logging.getLogger(__name__)

Oracle = Callable[[bv.Formula, int], BoundedResult]

EXACT, ESTIMATE, FAILED = "exact", "estimate", "failed"


def compute_pivot(epsilon: float) -> int:
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return 2 * math.ceil(math.exp(-1.5) * (1 + 1 / epsilon) ** 2)


def compute_t(delta: float) -> int:
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return math.ceil(35 * math.log2(3 / delta))


def find_median(values: Sequence[int]) -> int:
    """Lower median: element ``(len - 1) // 2`` of the sorted values."""
    if not values:
        raise ValueError("median of an empty list")
    return sorted(values)[(len(values) - 1) // 2]


@dataclass(frozen=True)
class Params:
    epsilon: float = 0.8
    delta: float = 0.2
    seed: int = 0

    @property
    def pivot(self) -> int:
        return compute_pivot(self.epsilon)

    @property
    def t(self) -> int:
        return compute_t(self.delta)


@dataclass(frozen=True)
class Step:
    """One pass of the refinement loop: the hash shape queried and |Y|."""

    C: tuple[int, ...]
    level: int
    num_cells: int
    moduli: tuple[int, ...]
    leaf: int


@dataclass(frozen=True)
class CoreTrace:
    outcome: str
    value: int | None
    C: tuple[int, ...] = ()
    num_cells: int = 1
    leaf: int = 0
    steps: tuple[Step, ...] = ()
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.outcome != FAILED


def _rng_for(seed: int, index: int) -> random.Random:
    # str seeds go through sha512, so streams are stable across runs and platforms
    return random.Random(f"smtcount:{seed}:{index}")


def approx_mc_core(f: bv.Formula, pivot: int, k: int, oracle: Oracle, rng: random.Random) -> CoreTrace:
    """One core invocation on a width-normalized formula.

    Solver timeouts turn this invocation into a failure; other solver
    errors propagate.
    """
    try:
        return _core(f, pivot, k, oracle, rng)
    except SolverTimeout as exc:
        return CoreTrace(FAILED, None, reason=f"timeout: {exc}")


def _core(f, pivot, k, oracle, rng) -> CoreTrace:
    Y = oracle(f, pivot)
    if len(Y) <= pivot:
        return CoreTrace(EXACT, len(Y), leaf=len(Y))

    n = len(f.support)
    space = 1 << (n * k)
    levels = num_levels(k)
    C = [0] * levels
    # Start one level down (words halved); width 1 has only level 0.
    i = 1 if levels > 1 else 0
    C[i] = 1
    config = make_config(n, k, C)
    steps = []
    while True:
        h = sample_hash(config, rng)
        cell = sample_cell(h, rng)
        Y = oracle(bv.conjoin(f, encode_constraint(h, cell, f.support)), pivot)
        num_cells = config.num_cells()
        steps.append(Step(config.C, i, num_cells, h.moduli, len(Y)))
        if 0 < len(Y) <= pivot:
            return CoreTrace(ESTIMATE, len(Y) * num_cells, config.C, num_cells, len(Y), tuple(steps))
        if len(Y) > pivot:
            C[i] += 1
        else:
            if config.primes[i].value == 2 or i + 1 >= levels:
                return CoreTrace(FAILED, None, config.C, num_cells, 0, tuple(steps), "empty cell at finest level")
            # trade one p_i factor for one p_{i+1}
            C[i] -= 1
            i += 1
            C[i] += 1
        config = make_config(n, k, C)
        if config.num_cells() > space:
            return CoreTrace(
                FAILED, None, config.C, config.num_cells(), len(Y), tuple(steps), "cell count exceeds assignment space"
            )


@dataclass(frozen=True)
class CountEstimate:
    final_count: int | None
    pivot: int
    t: int
    traces: tuple[CoreTrace, ...] = field(repr=False)

    @property
    def successes(self) -> int:
        return sum(tr.ok for tr in self.traces)

    @property
    def status(self) -> str:
        if self.final_count is None:
            return "timeout" if all(tr.reason.startswith("timeout") for tr in self.traces) else "failed"
        return "ok"


def approx_mc(
    f: bv.Formula,
    epsilon: float = 0.8,
    delta: float = 0.2,
    oracle: Oracle | OracleConfig | None = None,
    seed: int = 0,
) -> CountEstimate:
    """Estimate the number of models of ``f`` within factor ``1 + epsilon``
    with probability at least ``1 - delta``.

    Invocation ``i`` draws from its own stream derived from ``(seed, i)``,
    so results do not depend on the order invocations run in.
    """
    pivot, t = compute_pivot(epsilon), compute_t(delta)
    if oracle is None:
        oracle = OracleConfig()
    if isinstance(oracle, OracleConfig):
        oracle = make_oracle(oracle)
    g = bv.normalize_widths(f)
    k = max(g.max_width, 1)
    traces = tuple(approx_mc_core(g, pivot, k, oracle, _rng_for(seed, idx)) for idx in range(t))
    values = [tr.value for tr in traces if tr.ok]
    final = find_median(values) if values else None
    log.info("approx_mc: %d/%d invocations succeeded, count %s", len(values), t, final)
    return CountEstimate(final, pivot, t, traces)
