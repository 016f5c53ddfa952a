"""BoundedSMT: up to ``limit + 1`` distinct models of a formula.

Two backends share one contract.  ``EnumBackend`` scans the assignment
space with the vectorized evaluator; ``ProcessBackend`` drives an
SMT-LIB2 solver over stdin/stdout and blocks each model it receives.
"""

from __future__ import annotations

import logging
import os
import select
import shlex
import subprocess
import time
from collections import OrderedDict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import bvformula as bv
from .bvformula.evaluate import decode_indices, eval_bool
from .bvformula.smtlib import ParseError, Tok, _literal, bool_text, print_smt2, read_sexprs, symbol_text

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    pass


class SolverTimeout(SolverError):
    pass


class SolverCrash(SolverError):
    pass


class ProtocolError(SolverError):
    pass


class OracleConfigError(SolverError):
    pass


class SpaceTooLarge(ValueError):
    pass


MAX_ENUM_BITS = 28


@dataclass(frozen=True)
class OracleConfig:
    backend: str = "enum"
    solver_cmd: tuple[str, ...] = ()
    budget: float = 60.0

    def __post_init__(self):
        if self.backend not in ("enum", "process"):
            raise OracleConfigError(f"unknown backend {self.backend!r}")
        if not self.budget > 0:
            raise OracleConfigError(f"budget must be positive, got {self.budget}")
        if isinstance(self.solver_cmd, str):
            object.__setattr__(self, "solver_cmd", tuple(shlex.split(self.solver_cmd)))
        if self.backend == "process" and not self.solver_cmd:
            raise OracleConfigError("process backend needs a solver command")


@dataclass(frozen=True)
class BoundedResult:
    """Distinct models, each a tuple of values in support order."""

    names: tuple[str, ...]
    models: tuple[tuple[int, ...], ...]
    saturated: bool

    def __len__(self) -> int:
        return len(self.models)

    def assignments(self) -> list[dict[str, int]]:
        return [dict(zip(self.names, m)) for m in self.models]


class EnumBackend:
    """Exhaustive scan in lexicographic order (first declared variable most
    significant), stopping after ``limit + 1`` hits.

    The surviving index set of every scanned formula is remembered per
    top-level conjunct list, and a later formula that extends a remembered
    list only evaluates its new conjuncts on the survivors.  The counter
    leans on this: every query is the same base formula plus fresh hash
    constraints.
    """

    cache_bits = 24
    chunk = 1 << 20

    def __init__(self, budget: float | None = None, cache_size: int = 4):
        self.budget = budget
        self.cache_size = cache_size
        self._cache: OrderedDict[tuple, tuple[tuple, np.ndarray]] = OrderedDict()

    def __call__(self, phi: bv.Formula, limit: int) -> BoundedResult:
        if limit < 0:
            raise ValueError("limit must be nonnegative")
        bits = phi.total_bits
        if bits > MAX_ENUM_BITS:
            raise SpaceTooLarge(f"assignment space 2**{bits} exceeds 2**{MAX_ENUM_BITS}")
        deadline = time.monotonic() + self.budget if self.budget else None
        if bits <= self.cache_bits:
            hits = self._filter(phi, limit, deadline)
        else:
            hits = self._scan(phi, limit, deadline)
        hits = hits[: limit + 1]
        env = decode_indices(phi, hits)
        cols = [env[name].tolist() for name in phi.names]
        models = tuple(zip(*cols)) if cols else tuple(() for _ in range(len(hits)))
        return BoundedResult(phi.names, models, len(models) > limit)

    def _filter(self, phi: bv.Formula, limit: int, deadline) -> np.ndarray:
        conj = phi.conjuncts()
        keys = tuple(id(c) for c in conj)
        for m in range(len(conj), 0, -1):
            entry = self._cache.get(keys[:m])
            if entry is not None and all(a is b for a, b in zip(entry[0], conj)):
                self._cache.move_to_end(keys[:m])
                return self._extend(entry[1], entry[2], conj[m:], limit, deadline)
        cand = self._first_pass(phi, conj[0] if conj else phi.body, deadline)
        env = decode_indices(phi, cand)
        for c in conj[1:]:
            _check(deadline)
            keep = eval_bool(c, env, len(cand))
            cand, env = cand[keep], {k: v[keep] for k, v in env.items()}
        self._cache[keys] = (conj, cand, env)
        while len(self._cache) > self.cache_size:
            self._cache.popitem(last=False)
        return cand

    @staticmethod
    def _extend(cand, env, rest, limit, deadline) -> np.ndarray:
        """Survivors of ``rest`` among ``cand``, stopping past ``limit`` hits."""
        if not rest:
            return cand
        found, total = [], 0
        lo, step = 0, 4096
        while lo < len(cand) and total <= limit:
            part = cand[lo : lo + step]
            cols = {k: v[lo : lo + step] for k, v in env.items()}
            for c in rest:
                _check(deadline)
                if not len(part):
                    break
                keep = eval_bool(c, cols, len(part))
                part, cols = part[keep], {k: v[keep] for k, v in cols.items()}
            found.append(part)
            total += len(part)
            lo += step
            step *= 4
        return np.concatenate(found) if found else cand[:0]

    def _first_pass(self, phi: bv.Formula, c: bv.BoolExpr, deadline) -> np.ndarray:
        parts = []
        for lo in range(0, 1 << phi.total_bits, self.chunk):
            _check(deadline)
            idx = np.arange(lo, min(lo + self.chunk, 1 << phi.total_bits), dtype=np.uint32)
            parts.append(idx[eval_bool(c, decode_indices(phi, idx), len(idx))])
        return np.concatenate(parts)

    def _scan(self, phi: bv.Formula, limit: int, deadline) -> np.ndarray:
        found = []
        total = 0
        for lo in range(0, 1 << phi.total_bits, self.chunk):
            _check(deadline)
            idx = np.arange(lo, min(lo + self.chunk, 1 << phi.total_bits), dtype=np.uint64)
            hit = idx[eval_bool(phi.body, decode_indices(phi, idx), len(idx))]
            found.append(hit)
            total += len(hit)
            if total > limit:
                break
        return np.concatenate(found) if found else np.zeros(0, dtype=np.uint64)


def _check(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise SolverTimeout("enumeration budget exhausted")


class SolverSession:
    """One SMT-LIB2 solver child process, read with a wall-clock deadline."""

    def __init__(self, cmd: Sequence[str]):
        try:
            self.proc = subprocess.Popen(
                list(cmd),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
            )
        except OSError as exc:
            raise OracleConfigError(f"cannot start solver {cmd!r}: {exc}") from exc
        self._buf = b""

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        if self.proc.poll() is None:
            try:
                self.proc.stdin.write(b"(exit)\n")
                self.proc.stdin.flush()
            except OSError:
                pass
            self.proc.kill()
        self.proc.wait()
        for stream in (self.proc.stdin, self.proc.stdout, self.proc.stderr):
            stream.close()

    def send(self, text: str):
        try:
            self.proc.stdin.write(text.encode())
            self.proc.stdin.flush()
        except BrokenPipeError as exc:
            raise SolverCrash(f"solver closed its input: {self._stderr()}") from exc

    def _stderr(self) -> str:
        if self.proc.poll() is None:
            return ""
        return self.proc.stderr.read().decode(errors="replace").strip()

    def read_response(self, deadline: float) -> str:
        """Next complete response: one atom line or one balanced s-expression."""
        fd = self.proc.stdout.fileno()
        while True:
            text = self._take()
            if text is not None:
                return text
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                self.proc.kill()
                raise SolverTimeout("solver exceeded its budget")
            ready, _, _ = select.select([fd], [], [], remaining)
            if not ready:
                continue
            chunk = os.read(fd, 65536)
            if not chunk:
                self.proc.wait()
                raise SolverCrash(f"solver exited with status {self.proc.returncode}: {self._stderr()}")
            self._buf += chunk

    def _take(self) -> str | None:
        buf = self._buf.lstrip()
        if not buf:
            self._buf = b""
            return None
        if buf[:1] != b"(":
            nl = buf.find(b"\n")
            if nl < 0:
                self._buf = buf
                return None
            self._buf = buf[nl + 1 :]
            return buf[:nl].decode().strip()
        depth, quoted = 0, False
        for i, ch in enumerate(buf):
            if ch == ord("|"):
                quoted = not quoted
            elif quoted:
                continue
            elif ch == ord("("):
                depth += 1
            elif ch == ord(")"):
                depth -= 1
                if depth == 0:
                    self._buf = buf[i + 1 :]
                    return buf[: i + 1].decode()
        self._buf = buf
        return None


def _parse_values(text: str, phi: bv.Formula) -> tuple[int, ...]:
    try:
        (pairs,) = read_sexprs(text)
    except (ParseError, ValueError) as exc:
        raise ProtocolError(f"unparseable get-value response: {text!r}") from exc
    values = {}
    for pair in pairs:
        if not isinstance(pair, list) or len(pair) != 2 or not isinstance(pair[0], Tok):
            raise ProtocolError(f"unexpected get-value entry in {text!r}")
        name = pair[0].text.strip("|")
        values[name] = _value(pair[1], text)
    try:
        return tuple(values[v.name] for v in phi.support)
    except KeyError as exc:
        raise ProtocolError(f"solver did not report {exc} in {text!r}") from None


def _value(x, text: str) -> int:
    if isinstance(x, Tok):
        lit = _literal(x)
        if lit is not None:
            return lit.params[0]
    elif len(x) == 3 and all(isinstance(y, Tok) for y in x) and x[0].text == "_" and x[1].text.startswith("bv"):
        return int(x[1].text[2:])
    raise ProtocolError(f"unexpected value in {text!r}")


class ProcessBackend:
    """Blocking-clause enumeration through an external solver.

    Each call starts a fresh solver session.
    """

    def __init__(self, cmd: Sequence[str], budget: float = 60.0):
        self.cmd = tuple(cmd)
        self.budget = budget

    def __call__(self, phi: bv.Formula, limit: int) -> BoundedResult:
        deadline = time.monotonic() + self.budget
        models: list[tuple[int, ...]] = []
        names = " ".join(symbol_text(n) for n in phi.names)
        with SolverSession(self.cmd) as s:
            s.send("(set-option :produce-models true)\n" + print_smt2(phi))
            while len(models) <= limit:
                s.send("(check-sat)\n")
                answer = s.read_response(deadline)
                if answer == "unsat":
                    break
                if answer != "sat":
                    raise ProtocolError(f"expected sat/unsat, solver said {answer!r}")
                if not phi.support:
                    models.append(())
                    break
                s.send(f"(get-value ({names}))\n")
                model = _parse_values(s.read_response(deadline), phi)
                models.append(model)
                pin = bv.and_(*(bv.eq(bv.var_of(v), bv.const(x, v.width)) for v, x in zip(phi.support, model)))
                s.send(f"(assert {bool_text(bv.not_(pin))})\n")
        log.debug("process backend: %d model(s), limit %d", len(models), limit)
        return BoundedResult(phi.names, tuple(models), len(models) > limit)


def make_oracle(cfg: OracleConfig):
    """A callable ``(phi, limit) -> BoundedResult`` for ``cfg``."""
    if cfg.backend == "enum":
        return EnumBackend(cfg.budget)
    return ProcessBackend(cfg.solver_cmd, cfg.budget)


def enum_backend(phi: bv.Formula, limit: int) -> BoundedResult:
    return EnumBackend()(phi, limit)


def process_backend(phi: bv.Formula, limit: int, cfg: OracleConfig) -> BoundedResult:
    return ProcessBackend(cfg.solver_cmd, cfg.budget)(phi, limit)


def bounded_smt(phi: bv.Formula, pivot: int, cfg: OracleConfig = OracleConfig()) -> BoundedResult:
    """``pivot + 1`` models if ``phi`` has more than ``pivot``, else all of them."""
    if pivot < 1:
        raise ValueError("pivot must be at least 1")
    return make_oracle(cfg)(phi, pivot)
