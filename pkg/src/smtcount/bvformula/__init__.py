"""Fixed-width bit-vector formulas: construction, SMT-LIB2 I/O, evaluation."""

from .evaluate import EvaluationError, decode_indices, eval_bool, eval_term, evaluate, evaluate_many
from .normalize import normalize_widths
from .smtlib import ParseError, UnsupportedConstruct, parse_smt2, print_smt2
from .terms import (
    FALSE,
    TRUE,
    BoolExpr,
    Formula,
    FormulaError,
    Term,
    Variable,
    WidthError,
    and_,
    bvadd,
    bvand,
    bvmul,
    bvnot,
    bvor,
    bvurem,
    bvxor,
    concat,
    conjoin,
    const,
    eq,
    extract,
    ite,
    not_,
    or_,
    referenced_variables,
    uge,
    ugt,
    ule,
    ult,
    var,
    var_of,
    zero_extend,
)
