from __future__ import annotations

from . import terms as T
from .terms import BoolExpr, Formula, Term, Variable


def _substitute(node, repl: dict[str, Term]):
    if isinstance(node, Term):
        if node.op == "var":
            return repl.get(node.params[0], node)
        if not node.args:
            return node
        return Term(node.op, tuple(_substitute(a, repl) for a in node.args), node.width, node.params)
    if not node.args:
        return node
    return BoolExpr(node.op, tuple(_substitute(a, repl) for a in node.args))


def normalize_widths(f: Formula) -> Formula:
    """Widen every variable to the maximum support width.

    A variable ``x`` of width ``m < k`` becomes a width-``k`` variable of the
    same name, each use of ``x`` is replaced by its low ``m`` bits, and the
    high ``k - m`` bits are pinned to zero so the model count is unchanged.
    """
    k = f.max_width
    if all(v.width == k for v in f.support):
        return f
    repl: dict[str, Term] = {}
    pins: list[BoolExpr] = []
    support = []
    for v in f.support:
        support.append(Variable(v.name, k))
        if v.width < k:
            wide = T.var(v.name, k)
            repl[v.name] = T.extract(wide, 0, v.width - 1)
            pins.append(T.eq(T.extract(wide, v.width, k - 1), T.const(0, k - v.width)))
    body = _substitute(f.body, repl)
    return Formula(tuple(support), T.and_(*_top(body), *pins))


def _top(body: BoolExpr):
    if body == T.TRUE:
        return ()
    return body.args if body.op == "and" else (body,)
