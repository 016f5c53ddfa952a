"""Concrete and vectorized evaluation under unsigned fixed-width semantics.

Values are numpy arrays of the narrowest unsigned dtype holding the node
width (machine arithmetic wraps, then masks to the width), or ``object``
arrays of Python ints beyond 64 bits.  Scalar evaluation is the one-element case.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .terms import BoolExpr, Formula, FormulaError, Term, WidthError


class EvaluationError(FormulaError):
    pass


def _dtype(width: int):
    for bits, dt in ((8, np.uint8), (16, np.uint16), (32, np.uint32), (64, np.uint64)):
        if width <= bits:
            return dt
    return object


def _mask(width: int) -> int:
    return (1 << width) - 1


def _cast(v, width: int) -> np.ndarray:
    """View ``v`` (already < 2**width) in the dtype used for ``width``."""
    v = np.asarray(v)
    dt = _dtype(width)
    if v.dtype == dt:
        return v
    return v.astype(dt)


def _wrap(v, width: int) -> np.ndarray:
    v = np.asarray(v)
    if v.dtype == object:
        v = v & _mask(width)
        return v.astype(_dtype(width)) if width <= 64 else v
    if width < 8 * v.dtype.itemsize:
        v = v & v.dtype.type(_mask(width))
    return _cast(v, width)


def _int(amount: int, v: np.ndarray):
    return v.dtype.type(amount) if v.dtype != object else amount


# Constants evaluate to 0-d arrays and broadcast against variable columns.
# _term also returns a static upper bound on the node's value so that adds
# and multiplies that cannot leave their width skip the masking pass.


def _term(t: Term, env) -> tuple[np.ndarray, int]:
    op = t.op
    if op == "var":
        return env[t.params[0]], _mask(t.width)
    if op == "const":
        return np.asarray(t.params[0], dtype=_dtype(t.width)), t.params[0]
    if op == "ite":
        a, ba = _term(t.args[1], env)
        b, bb = _term(t.args[2], env)
        return np.where(_bool(t.args[0], env), a, b), max(ba, bb)
    if op == "extract":
        lo, hi = t.params
        v, bound = _term(t.args[0], env)
        v = v >> _int(lo, v)
        bound >>= lo
        if bound > _mask(hi - lo + 1):
            return _wrap(v, hi - lo + 1), _mask(hi - lo + 1)
        return _cast(v, hi - lo + 1), bound
    if op == "zero_extend":
        v, bound = _term(t.args[0], env)
        return _cast(v, t.width), bound
    if op == "bvnot":
        v, _ = _term(t.args[0], env)
        return np.asarray(v ^ _int(_mask(t.width), v)), _mask(t.width)
    if op == "concat":
        hi_t, lo_t = t.args
        a = _cast(_term(hi_t, env)[0], t.width)
        b = _cast(_term(lo_t, env)[0], t.width)
        return np.asarray((a << _int(lo_t.width, a)) | b), _mask(t.width)
    a, ba = _term(t.args[0], env)
    b, bb = _term(t.args[1], env)
    top = _mask(t.width)
    if op == "bvadd" or op == "bvmul":
        v, bound = (a + b, ba + bb) if op == "bvadd" else (a * b, ba * bb)
        if bound > top:
            return _wrap(v, t.width), top
        return np.asarray(v), bound
    if op == "bvurem":
        zero = b == 0
        safe = np.where(zero, 1, b).astype(b.dtype)
        # SMT-LIB: x bvurem 0 = x
        return np.where(zero, a, a % safe), ba
    if op == "bvand":
        return np.asarray(a & b), min(ba, bb)
    if op == "bvor":
        return np.asarray(a | b), _mask(max(ba, bb).bit_length())
    if op == "bvxor":
        return np.asarray(a ^ b), _mask(max(ba, bb).bit_length())
    raise EvaluationError(f"unknown term operator {op!r}")


def _bool(e: BoolExpr, env) -> np.ndarray:
    op = e.op
    if op == "true":
        return np.asarray(True)
    if op == "false":
        return np.asarray(False)
    if op == "and":
        out = _bool(e.args[0], env)
        for arg in e.args[1:]:
            out = out & _bool(arg, env)
        return out
    if op == "or":
        out = _bool(e.args[0], env)
        for arg in e.args[1:]:
            out = out | _bool(arg, env)
        return out
    if op == "not":
        return ~_bool(e.args[0], env)
    if op == "ite":
        return np.where(_bool(e.args[0], env), _bool(e.args[1], env), _bool(e.args[2], env))
    a = _term(e.args[0], env)[0]
    b = _term(e.args[1], env)[0]
    if op == "=":
        r = a == b
    elif op == "bvult":
        r = a < b
    elif op == "bvule":
        r = a <= b
    elif op == "bvugt":
        r = a > b
    elif op == "bvuge":
        r = a >= b
    else:
        raise EvaluationError(f"unknown boolean operator {op!r}")
    return np.asarray(r, dtype=bool)


def eval_term(t: Term, env: Mapping[str, np.ndarray], size: int) -> np.ndarray:
    """Values of ``t`` for ``size`` assignments given as columns in ``env``."""
    with np.errstate(over="ignore"):
        v = _term(t, env)[0]
    return np.broadcast_to(v, (size,))


def eval_bool(e: BoolExpr, env: Mapping[str, np.ndarray], size: int) -> np.ndarray:
    with np.errstate(over="ignore"):
        v = _bool(e, env)
    return np.broadcast_to(v, (size,))


def evaluate(f: Formula, assignment: Mapping[str, int]) -> bool:
    """Whether ``assignment`` (total over ``f.support``) is a model of ``f``."""
    env = {}
    for v in f.support:
        if v.name not in assignment:
            raise EvaluationError(f"assignment is missing variable {v.name!r}")
        value = int(assignment[v.name])
        if not 0 <= value < (1 << v.width):
            raise WidthError(f"value {value} does not fit {v.name!r} of width {v.width}")
        env[v.name] = np.array([value], dtype=_dtype(v.width))
    return bool(eval_bool(f.body, env, 1)[0])


def decode_indices(f: Formula, indices: np.ndarray) -> dict[str, np.ndarray]:
    """Variable values for flat assignment indices.

    Index order is lexicographic over the support in declaration order: the
    first declared variable occupies the most significant bits.
    """
    idx = np.asarray(indices, dtype=np.uint64)
    env = {}
    shift = f.total_bits
    for v in f.support:
        shift -= v.width
        env[v.name] = ((idx >> np.uint64(shift)) & np.uint64(_mask(v.width))).astype(_dtype(v.width))
    return env


def evaluate_many(f: Formula, env: Mapping[str, np.ndarray], size: int) -> np.ndarray:
    return eval_bool(f.body, env, size)
