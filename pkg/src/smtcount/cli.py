"""Command-line front end.

    smtcount count FILE [--epsilon E] [--delta D] [--seed S] [--backend enum|process]
    smtcount exact FILE
    smtcount validate [--corpus DIR] [--seeds N]
    smtcount hash-stats --n N --k K --C 0,1 [--trials T]

Exit status: 0 success, 1 every core invocation failed, 2 usage or parse
error, 3 solver misconfiguration or all invocations timed out.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bvformula as bv
from .counter import CountEstimate, approx_mc
from .oracle import OracleConfig, SolverError, SpaceTooLarge
from .validate import desk_corpus, exact_count, hash_law_suite, load_corpus, run_quality_suite

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _epsilon(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("epsilon must be > 0")
    return v


def _delta(s: str) -> float:
    v = float(s)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("delta must lie in (0, 1)")
    return v


def _budget(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("budget must be > 0")
    return v


def _seed(s: str) -> int:
    v = int(s, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit value")
    return v


def _counts(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", type=_epsilon, default=0.8)
    common.add_argument("--delta", type=_delta, default=0.2)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--backend", choices=("enum", "process"), default="enum")
    common.add_argument("--solver-cmd", default="", help='e.g. "z3 -in"')
    common.add_argument("--budget", type=_budget, default=60.0, help="seconds per bounded call")
    common.add_argument("--json", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="smtcount", description="Approximate model counting for bit-vector formulas.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("count", parents=[common], help="approximate model count")
    c.add_argument("file")
    e = sub.add_parser("exact", parents=[common], help="exact count by enumeration")
    e.add_argument("file")
    v = sub.add_parser("validate", parents=[common], help="accuracy report over a corpus")
    v.add_argument("--corpus", help="directory of .smt2 files (default: built-in desk corpus)")
    v.add_argument("--seeds", type=int, default=5)
    h = sub.add_parser("hash-stats", parents=[common], help="hash family uniformity and independence")
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--k", type=int, required=True)
    h.add_argument("--C", type=_counts, required=True)
    h.add_argument("--trials", type=int, default=100_000)
    return p


def estimate_json(est: CountEstimate) -> dict:
    return {
        "final_count": None if est.final_count is None else str(est.final_count),
        "t": est.t,
        "pivot": est.pivot,
        "successes": est.successes,
        "iterations": [
            {"C": list(tr.C), "num_cells": str(tr.num_cells), "leaf": tr.leaf, "outcome": tr.outcome}
            for tr in est.traces
        ],
        "status": est.status,
    }


def _read(path: str) -> bv.Formula:
    return bv.parse_smt2(Path(path).read_text())


def _oracle(args) -> OracleConfig:
    return OracleConfig(args.backend, args.solver_cmd, args.budget)


def _count(args) -> int:
    est = approx_mc(_read(args.file), args.epsilon, args.delta, _oracle(args), args.seed)
    if args.json:
        print(json.dumps(estimate_json(est), sort_keys=True))
    else:
        outcomes = {}
        for tr in est.traces:
            outcomes[tr.outcome] = outcomes.get(tr.outcome, 0) + 1
        print(est.final_count if est.final_count is not None else "FAILED")
        summary = ", ".join(f"{k} {v}" for k, v in sorted(outcomes.items()))
        print(f"pivot {est.pivot}, t {est.t}, successes {est.successes}/{est.t} ({summary})", file=sys.stderr)
    if est.status == "timeout":
        return EXIT_SOLVER
    return EXIT_OK if est.status == "ok" else EXIT_FAILED


def _exact(args) -> int:
    n = exact_count(_read(args.file))
    print(json.dumps({"exact_count": str(n)}) if args.json else n)
    return EXIT_OK


def _validate(args) -> int:
    corpus = load_corpus(args.corpus) if args.corpus else desk_corpus()
    report = run_quality_suite(corpus, args.epsilon, args.delta, range(args.seed, args.seed + args.seeds), _oracle(args))
    print(report.to_json() if args.json else report.to_table())
    return EXIT_OK


def _hash_stats(args) -> int:
    results = hash_law_suite([(args.n, args.k, args.C)], args.trials, args.seed)
    ok = True
    rows = []
    for cfg, *checks in results:
        for chk in checks:
            ok &= chk.passed
            rows.append(
                {"config": list(cfg[:2]) + [list(cfg[2])], "law": chk.law, "bins": chk.bins,
                 "expected": chk.expected, "max_z": chk.max_z, "threshold": chk.threshold, "passed": chk.passed}
            )
    if args.json:
        print(json.dumps(rows, sort_keys=True))
    else:
        for r in rows:
            print(f"{r['law']:<11} bins={r['bins']:<5} p={r['expected']:.5f} max|z|={r['max_z']:.2f} "
                  f"(limit {r['threshold']:.2f}) {'PASS' if r['passed'] else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    handler = {"count": _count, "exact": _exact, "validate": _validate, "hash-stats": _hash_stats}[args.command]
    try:
        return handler(args)
    except (bv.FormulaError, OSError, SpaceTooLarge) as exc:
        print(f"smtcount: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"smtcount: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"smtcount: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
