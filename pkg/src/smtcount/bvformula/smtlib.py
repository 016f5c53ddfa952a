"""Reader and writer for the QF_BV subset of SMT-LIB 2.6 we support.

Accepted: ``set-logic``/``set-info``/``set-option`` (ignored apart from
requiring QF_BV), ``declare-fun``/``declare-const`` of ``(_ BitVec k)``,
``assert``, and ``check-sat``/``get-model``/``exit`` (ignored).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import terms as T
from .terms import BoolExpr, Formula, FormulaError, Term, Variable


class ParseError(FormulaError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {message}" if line else message)


class UnsupportedConstruct(ParseError):
    def __init__(self, operator: str, line: int = 0, col: int = 0):
        self.operator = operator
        super().__init__(f"unsupported construct {operator!r}", line, col)


@dataclass(frozen=True)
class Tok:
    text: str
    line: int
    col: int


class SList(list):
    """A parenthesised s-expression remembering where it opened."""

    line = 0
    col = 0


_TOKEN = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>;[^\n]*)
    | (?P<open>\()
    | (?P<close>\))
    | (?P<quoted>\|[^|]*\|)
    | (?P<string>"(?:[^"]|"")*")
    | (?P<atom>[^\s()|";]+)
    """,
    re.VERBOSE,
)


def tokenize(text: str):
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            yield kind, Tok(m.group(), line, pos - line_start + 1)
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()


def read_sexprs(text: str) -> list:
    stack: list[SList] = [SList()]
    for kind, tok in tokenize(text):
        if kind == "open":
            lst = SList()
            lst.line, lst.col = tok.line, tok.col
            stack.append(lst)
        elif kind == "close":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", tok.line, tok.col)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise ParseError("unexpected end of input: missing ')'", stack[-1].line, stack[-1].col)
    return stack[0]


def _pos(x):
    return (x.line, x.col)


def _symbol(x) -> str:
    if not isinstance(x, Tok):
        raise ParseError("expected a symbol", *_pos(x))
    s = x.text
    if s.startswith("|") and s.endswith("|"):
        return s[1:-1]
    return s


def _numeral(x) -> int:
    if isinstance(x, Tok) and x.text.isdigit():
        return int(x.text)
    raise ParseError("expected a numeral", *_pos(x))


def _parse_sort(x) -> int:
    if (
        isinstance(x, list)
        and len(x) == 3
        and isinstance(x[0], Tok)
        and x[0].text == "_"
        and isinstance(x[1], Tok)
        and x[1].text == "BitVec"
    ):
        width = _numeral(x[2])
        if width < 1:
            raise ParseError("bit-vector width must be positive", *_pos(x))
        return width
    if isinstance(x, Tok):
        raise UnsupportedConstruct(f"sort {x.text}", *_pos(x))
    raise UnsupportedConstruct("sort " + _render(x), *_pos(x))


def _render(x) -> str:
    if isinstance(x, Tok):
        return x.text
    return "(" + " ".join(_render(y) for y in x) + ")"


def _literal(tok: Tok) -> Term | None:
    s = tok.text
    if s.startswith("#b") and len(s) > 2 and set(s[2:]) <= {"0", "1"}:
        return T.const(int(s[2:], 2), len(s) - 2)
    if s.startswith("#x") and len(s) > 2:
        try:
            return T.const(int(s[2:], 16), 4 * (len(s) - 2))
        except ValueError:
            raise ParseError(f"bad hex literal {s}", tok.line, tok.col) from None
    return None


class _ExprParser:
    def __init__(self, declared: dict[str, Variable]):
        self.declared = declared

    def term(self, x) -> Term:
        e = self.expr(x)
        if not isinstance(e, Term):
            raise ParseError("expected a bit-vector term, got a boolean", *_pos(x))
        return e

    def boolean(self, x) -> BoolExpr:
        e = self.expr(x)
        if not isinstance(e, BoolExpr):
            raise ParseError("expected a boolean, got a bit-vector term", *_pos(x))
        return e

    def expr(self, x):
        try:
            return self._expr(x)
        except T.WidthError as exc:
            raise ParseError(f"width mismatch: {exc}", *_pos(x)) from None
        except ParseError:
            raise
        except FormulaError as exc:
            raise ParseError(str(exc), *_pos(x)) from None

    def _expr(self, x):
        if isinstance(x, Tok):
            if x.text == "true":
                return T.TRUE
            if x.text == "false":
                return T.FALSE
            lit = _literal(x)
            if lit is not None:
                return lit
            name = _symbol(x)
            if name in self.declared:
                return T.var_of(self.declared[name])
            raise ParseError(f"undeclared symbol {name!r}", *_pos(x))
        if not x:
            raise ParseError("empty application ()", *_pos(x))
        head = x[0]
        if isinstance(head, Tok) and head.text == "_":
            # (_ bvN k)
            if len(x) == 3 and isinstance(x[1], Tok) and re.fullmatch(r"bv\d+", x[1].text):
                return T.const(int(x[1].text[2:]), _numeral(x[2]))
            raise UnsupportedConstruct(_render(x), *_pos(x))
        if isinstance(head, list):
            return self._indexed(head, x[1:], x)
        op = head.text
        args = x[1:]
        if op in T.BINARY_OPS:
            if len(args) < 2:
                raise ParseError(f"{op} expects at least 2 arguments", *_pos(x))
            ts = [self.term(a) for a in args]
            out = ts[0]
            for t in ts[1:]:
                out = T._binary(op, out, t)
            return out
        if op == "concat":
            if len(args) < 2:
                raise ParseError("concat expects at least 2 arguments", *_pos(x))
            ts = [self.term(a) for a in args]
            out = ts[0]
            for t in ts[1:]:
                out = T.concat(out, t)
            return out
        if op == "bvnot":
            self._arity(x, 1)
            return T.bvnot(self.term(args[0]))
        if op in T.COMPARISONS or op == "=":
            self._arity(x, 2)
            a, b = self.expr(args[0]), self.expr(args[1])
            if not (isinstance(a, Term) and isinstance(b, Term)):
                raise UnsupportedConstruct(f"{op} over booleans", *_pos(x))
            return T._compare(op, a, b)
        if op == "and":
            return T.and_(*(self.boolean(a) for a in args))
        if op == "or":
            return T.or_(*(self.boolean(a) for a in args))
        if op == "not":
            self._arity(x, 1)
            return T.not_(self.boolean(args[0]))
        if op == "ite":
            self._arity(x, 3)
            return T.ite(self.boolean(args[0]), self.expr(args[1]), self.expr(args[2]))
        raise UnsupportedConstruct(op, head.line, head.col)

    def _indexed(self, head, args, x):
        if not (len(head) >= 2 and isinstance(head[0], Tok) and head[0].text == "_" and isinstance(head[1], Tok)):
            raise UnsupportedConstruct(_render(head), *_pos(head))
        name = head[1].text
        if name == "extract" and len(head) == 4:
            self._arity(x, 1)
            hi, lo = _numeral(head[2]), _numeral(head[3])
            return T.extract(self.term(args[0]), lo, hi)
        if name == "zero_extend" and len(head) == 3:
            self._arity(x, 1)
            extra = _numeral(head[2])
            t = self.term(args[0])
            if extra == 0:
                return t
            return T.zero_extend(t, extra)
        raise UnsupportedConstruct(name, head[1].line, head[1].col)

    @staticmethod
    def _arity(x, n):
        if len(x) - 1 != n:
            raise ParseError(f"{_render(x[0])} expects {n} argument(s), got {len(x) - 1}", *_pos(x))


_IGNORED = {"check-sat", "exit", "get-model", "set-info", "set-option", "get-info"}


def parse_smt2(text: str) -> Formula:
    """Parse SMT-LIB2 text into a :class:`Formula`.

    Multiple ``assert`` commands become one top-level conjunction.
    """
    declared: dict[str, Variable] = {}
    asserts: list[BoolExpr] = []
    parser = _ExprParser(declared)
    for cmd in read_sexprs(text):
        if not isinstance(cmd, list) or not cmd or not isinstance(cmd[0], Tok):
            raise ParseError("expected a command", *_pos(cmd))
        name = cmd[0].text
        if name == "set-logic":
            if len(cmd) != 2 or _symbol(cmd[1]) != "QF_BV":
                raise UnsupportedConstruct("logic " + " ".join(_render(c) for c in cmd[1:]), *_pos(cmd))
        elif name in ("declare-fun", "declare-const"):
            if name == "declare-fun":
                if len(cmd) != 4:
                    raise ParseError("declare-fun expects name, argument sorts and sort", *_pos(cmd))
                if not isinstance(cmd[2], list) or cmd[2]:
                    raise UnsupportedConstruct("declare-fun with arguments", *_pos(cmd))
                sort = cmd[3]
            else:
                if len(cmd) != 3:
                    raise ParseError("declare-const expects name and sort", *_pos(cmd))
                sort = cmd[2]
            vname = _symbol(cmd[1])
            if vname in declared:
                raise ParseError(f"duplicate declaration of {vname!r}", *_pos(cmd[1]))
            declared[vname] = Variable(vname, _parse_sort(sort))
        elif name == "assert":
            if len(cmd) != 2:
                raise ParseError("assert expects one argument", *_pos(cmd))
            asserts.append(parser.boolean(cmd[1]))
        elif name in _IGNORED:
            pass
        else:
            raise UnsupportedConstruct(name, *_pos(cmd[0]))
    return Formula.build(declared.values(), T.and_(*asserts))


_SIMPLE_SYMBOL = re.compile(r"[A-Za-z~!@$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*")
_RESERVED = {"true", "false", "and", "or", "not", "ite", "assert", "_", "let", "par", "exists", "forall"}


def symbol_text(name: str) -> str:
    if _SIMPLE_SYMBOL.fullmatch(name) and name not in _RESERVED:
        return name
    return f"|{name}|"


def const_text(value: int, width: int) -> str:
    return "#b" + format(value, f"0{width}b")


def term_text(t: Term) -> str:
    op = t.op
    if op == "var":
        return symbol_text(t.params[0])
    if op == "const":
        return const_text(t.params[0], t.width)
    if op == "extract":
        lo, hi = t.params
        return f"((_ extract {hi} {lo}) {term_text(t.args[0])})"
    if op == "zero_extend":
        return f"((_ zero_extend {t.params[0]}) {term_text(t.args[0])})"
    if op == "ite":
        c, a, b = t.args
        return f"(ite {bool_text(c)} {term_text(a)} {term_text(b)})"
    return "(" + op + " " + " ".join(term_text(a) for a in t.args) + ")"


def bool_text(e: BoolExpr) -> str:
    op = e.op
    if op in ("true", "false"):
        return op
    if op in ("and", "or", "not"):
        return "(" + op + " " + " ".join(bool_text(a) for a in e.args) + ")"
    if op == "ite":
        return "(ite " + " ".join(bool_text(a) for a in e.args) + ")"
    return "(" + op + " " + " ".join(term_text(a) for a in e.args) + ")"


def declarations_text(f: Formula) -> str:
    return "".join(f"(declare-fun {symbol_text(v.name)} () (_ BitVec {v.width}))\n" for v in f.support)


def print_smt2(f: Formula, logic: bool = True, check_sat: bool = False) -> str:
    parts = ["(set-logic QF_BV)\n"] if logic else []
    parts.append(declarations_text(f))
    conj = f.conjuncts() or (T.TRUE,)
    parts.extend(f"(assert {bool_text(c)})\n" for c in conj)
    if check_sat:
        parts.append("(check-sat)\n")
    return "".join(parts)
