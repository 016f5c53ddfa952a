"""Accuracy of the approximate counter against exact counts."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .. import bvformula as bv
from ..counter import approx_mc, find_median
from ..oracle import OracleConfig, SolverError, make_oracle
from .exact import exact_count

log = logging.getLogger(__name__)


def eps_obs(exact: int, estimate: int) -> Fraction:
    """Observed tolerance: how far ``estimate`` is from ``exact``, as a
    nonnegative ratio excess in whichever direction it errs."""
    if exact <= 0 or estimate <= 0:
        raise ValueError(f"eps_obs needs positive counts, got exact={exact}, estimate={estimate}")
    if estimate >= exact:
        return Fraction(estimate, exact) - 1
    return Fraction(exact, estimate) - 1


def _eps_or_none(exact: int, estimate: int | None) -> Fraction | None:
    if estimate is None:
        return None
    if exact == estimate == 0:
        return Fraction(0)
    if exact == 0 or estimate == 0:
        return None
    return eps_obs(exact, estimate)


def within_tolerance(exact: int, estimate: int | None, epsilon: float) -> bool:
    if estimate is None:
        return False
    factor = 1 + Fraction(str(epsilon))
    return Fraction(exact) / factor <= estimate <= factor * exact


@dataclass(frozen=True)
class QualityRecord:
    formula: str
    seed: int
    exact: int
    estimate: int | None
    eps_obs: Fraction | None
    within: bool
    status: str = "ok"


@dataclass(frozen=True)
class FormulaSummary:
    formula: str
    exact: int
    runs: int
    median_estimate: int | None
    eps_obs: Fraction | None
    within_fraction: float


@dataclass(frozen=True)
class CorpusReport:
    epsilon: float
    delta: float
    records: tuple[QualityRecord, ...]
    summaries: tuple[FormulaSummary, ...]

    @property
    def within_fraction(self) -> float:
        return sum(r.within for r in self.records) / len(self.records) if self.records else 1.0

    @property
    def min_within_fraction(self) -> float:
        return min((s.within_fraction for s in self.summaries), default=1.0)

    @property
    def geo_mean_eps(self) -> float:
        """exp(mean(log(1 + eps))) - 1 over the per-formula median estimates
        whose eps_obs is defined."""
        vals = [float(s.eps_obs) for s in self.summaries if s.eps_obs is not None]
        if not vals:
            return 0.0
        return math.exp(sum(math.log1p(v) for v in vals) / len(vals)) - 1

    def to_json(self) -> str:
        def enc(x):
            if isinstance(x, Fraction):
                return float(x)
            raise TypeError(type(x))

        doc = {
            "note": "geo_mean_eps_obs = geometric mean of (1 + eps_obs) over per-formula median estimates, minus 1",
            "epsilon": self.epsilon,
            "delta": self.delta,
            "within_fraction": self.within_fraction,
            "min_within_fraction": self.min_within_fraction,
            "geo_mean_eps_obs": self.geo_mean_eps,
            "summaries": [
                {**asdict(s), "exact": str(s.exact), "median_estimate": _s(s.median_estimate)} for s in self.summaries
            ],
            "records": [{**asdict(r), "exact": str(r.exact), "estimate": _s(r.estimate)} for r in self.records],
        }
        return json.dumps(doc, indent=2, default=enc)

    def to_table(self) -> str:
        lines = [
            f"# epsilon={self.epsilon} delta={self.delta}; "
            "geometric mean taken over (1 + eps_obs) of median estimates, minus 1",
            f"{'Id':>3}  {'Benchmark':<16} {'Exact Count':>12} {'Estimated Count':>16} {'eps_obs':>8} {'in-tol':>7}",
        ]
        for i, s in enumerate(self.summaries, 1):
            eps = f"{float(s.eps_obs):.4f}" if s.eps_obs is not None else "n/a"
            est = "fail" if s.median_estimate is None else str(s.median_estimate)
            lines.append(f"{i:>3}  {s.formula:<16} {s.exact:>12} {est:>16} {eps:>8} {s.within_fraction:>7.2f}")
        lines.append(
            f"within tolerance: {self.within_fraction:.3f} (worst formula {self.min_within_fraction:.3f}); "
            f"geometric-mean eps_obs: {self.geo_mean_eps:.4f}"
        )
        return "\n".join(lines)


def _s(x):
    return None if x is None else str(x)


def run_quality_suite(
    corpus: Mapping[str, bv.Formula],
    epsilon: float = 0.8,
    delta: float = 0.2,
    seeds: Iterable[int] = range(5),
    oracle: OracleConfig = OracleConfig(),
) -> CorpusReport:
    """Run the counter on every formula for every seed.

    A counter error on one run is recorded as a failed run; the suite
    keeps going.
    """
    seeds = list(seeds)
    records, summaries = [], []
    for name, f in corpus.items():
        exact = exact_count(f)
        backend = make_oracle(oracle)
        runs = []
        for seed in seeds:
            try:
                est = approx_mc(f, epsilon, delta, backend, seed)
                value, status = est.final_count, est.status
            except (SolverError, ValueError) as exc:
                log.warning("%s seed %d: %s", name, seed, exc)
                value, status = None, f"error: {exc}"
            runs.append(
                QualityRecord(
                    name, seed, exact, value, _eps_or_none(exact, value), within_tolerance(exact, value, epsilon), status
                )
            )
        records.extend(runs)
        ok = [r.estimate for r in runs if r.estimate is not None]
        med = find_median(ok) if ok else None
        summaries.append(
            FormulaSummary(
                name, exact, len(runs), med, _eps_or_none(exact, med), sum(r.within for r in runs) / len(runs)
            )
        )
    return CorpusReport(epsilon, delta, tuple(records), tuple(summaries))
