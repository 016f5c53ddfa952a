"""Fixed-width bit-vector terms and boolean formulas.

Nodes are immutable, structurally comparable dataclasses. Constructors
check widths eagerly, so every node that exists is well typed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class FormulaError(ValueError):
    pass


class WidthError(FormulaError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise WidthError(f"variable {self.name!r} has width {self.width}")


@dataclass(frozen=True)
class Term:
    """A bit-vector term.

    ``params`` holds the non-term data of a node: ``(name,)`` for variables,
    ``(value,)`` for constants, ``(lo, hi)`` for extract and ``(extra,)``
    for zero_extend.  For ``ite`` the first arg is a :class:`BoolExpr`.
    """

    op: str
    args: tuple = ()
    width: int = 0
    params: tuple = ()


@dataclass(frozen=True)
class BoolExpr:
    op: str
    args: tuple = ()


TRUE = BoolExpr("true")
FALSE = BoolExpr("false")

BINARY_OPS = ("bvadd", "bvmul", "bvurem", "bvand", "bvor", "bvxor")
COMPARISONS = ("bvult", "bvule", "bvugt", "bvuge")


def var(name: str, width: int) -> Term:
    Variable(name, width)
    return Term("var", (), width, (name,))


def var_of(v: Variable) -> Term:
    return Term("var", (), v.width, (v.name,))


def const(value: int, width: int) -> Term:
    if width < 1:
        raise WidthError(f"constant width {width}")
    if not 0 <= value < (1 << width):
        raise WidthError(f"constant {value} does not fit in {width} bits")
    return Term("const", (), width, (value,))


def _binary(op: str, a: Term, b: Term) -> Term:
    if a.width != b.width:
        raise WidthError(f"{op}: operand widths {a.width} and {b.width} differ")
    return Term(op, (a, b), a.width)


def bvadd(a: Term, b: Term) -> Term:
    return _binary("bvadd", a, b)


def bvmul(a: Term, b: Term) -> Term:
    return _binary("bvmul", a, b)


def bvurem(a: Term, b: Term) -> Term:
    return _binary("bvurem", a, b)


def bvand(a: Term, b: Term) -> Term:
    return _binary("bvand", a, b)


def bvor(a: Term, b: Term) -> Term:
    return _binary("bvor", a, b)


def bvxor(a: Term, b: Term) -> Term:
    return _binary("bvxor", a, b)


def bvnot(a: Term) -> Term:
    return Term("bvnot", (a,), a.width)


def concat(hi: Term, lo: Term) -> Term:
    return Term("concat", (hi, lo), hi.width + lo.width)


def extract(t: Term, lo: int, hi: int) -> Term:
    """Bits lo..hi (inclusive) of ``t``; bit 0 is the least significant."""
    if not 0 <= lo <= hi < t.width:
        raise WidthError(f"extract [{lo}:{hi}] out of range for width {t.width}")
    return Term("extract", (t,), hi - lo + 1, (lo, hi))


def zero_extend(t: Term, extra: int) -> Term:
    if extra < 0:
        raise WidthError(f"zero_extend by {extra}")
    if extra == 0:
        return t
    return Term("zero_extend", (t,), t.width + extra, (extra,))


def ite(cond: BoolExpr, a, b):
    if not isinstance(cond, BoolExpr):
        raise FormulaError("ite condition must be boolean")
    if isinstance(a, Term) and isinstance(b, Term):
        if a.width != b.width:
            raise WidthError(f"ite: branch widths {a.width} and {b.width} differ")
        return Term("ite", (cond, a, b), a.width)
    if isinstance(a, BoolExpr) and isinstance(b, BoolExpr):
        return BoolExpr("ite", (cond, a, b))
    raise FormulaError("ite branches must both be terms or both be boolean")


def _compare(op: str, a: Term, b: Term) -> BoolExpr:
    if not (isinstance(a, Term) and isinstance(b, Term)):
        raise FormulaError(f"{op} expects bit-vector operands")
    if a.width != b.width:
        raise WidthError(f"{op}: operand widths {a.width} and {b.width} differ")
    return BoolExpr(op, (a, b))


def eq(a: Term, b: Term) -> BoolExpr:
    return _compare("=", a, b)


def ult(a: Term, b: Term) -> BoolExpr:
    return _compare("bvult", a, b)


def ule(a: Term, b: Term) -> BoolExpr:
    return _compare("bvule", a, b)


def ugt(a: Term, b: Term) -> BoolExpr:
    return _compare("bvugt", a, b)


def uge(a: Term, b: Term) -> BoolExpr:
    return _compare("bvuge", a, b)


def and_(*args: BoolExpr) -> BoolExpr:
    args = tuple(a for a in args if a != TRUE)
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return BoolExpr("and", args)


def or_(*args: BoolExpr) -> BoolExpr:
    args = tuple(a for a in args if a != FALSE)
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return BoolExpr("or", args)


def not_(a: BoolExpr) -> BoolExpr:
    return BoolExpr("not", (a,))


def iter_nodes(node) -> Iterator:
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.args))


def referenced_variables(node) -> dict[str, int]:
    found: dict[str, int] = {}
    for n in iter_nodes(node):
        if isinstance(n, Term) and n.op == "var":
            name = n.params[0]
            if found.setdefault(name, n.width) != n.width:
                raise WidthError(f"variable {name!r} used at widths {found[name]} and {n.width}")
    return found


@dataclass(frozen=True)
class Formula:
    """Boolean body over a declared, ordered support.

    Declared-but-unused variables belong to the support and are counted.
    The plain constructor trusts its inputs; :meth:`build` validates.
    """

    support: tuple[Variable, ...]
    body: BoolExpr = TRUE
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(self.support))
        index = {v.name: v for v in self.support}
        if len(index) != len(self.support):
            raise FormulaError("duplicate variable names in support")
        object.__setattr__(self, "_index", index)

    @classmethod
    def build(cls, support: Iterable[Variable], body: BoolExpr) -> "Formula":
        f = cls(tuple(support), body)
        for name, width in referenced_variables(body).items():
            if name not in f._index:
                raise FormulaError(f"variable {name!r} is not declared")
            if f._index[name].width != width:
                raise WidthError(f"variable {name!r} declared with width {f._index[name].width}, used at {width}")
        return f

    def variable(self, name: str) -> Variable:
        return self._index[name]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.support)

    @property
    def total_bits(self) -> int:
        return sum(v.width for v in self.support)

    @property
    def max_width(self) -> int:
        return max((v.width for v in self.support), default=0)

    def conjuncts(self) -> tuple[BoolExpr, ...]:
        if self.body == TRUE:
            return ()
        if self.body.op == "and":
            return self.body.args
        return (self.body,)


def conjoin(f: Formula, *extra: BoolExpr) -> Formula:
    """``f`` with extra conjuncts appended at top level (no re-validation)."""
    return Formula(f.support, and_(*f.conjuncts(), *_flatten(extra)))


def _flatten(exprs: Sequence[BoolExpr]):
    for e in exprs:
        if e.op == "and":
            yield from e.args
        else:
            yield e
