"""Approximate model counting for fixed-width bit-vector formulas using
word-level 2-universal hashing."""

from .bvformula import Formula, normalize_widths, parse_smt2, print_smt2
from .counter import CountEstimate, approx_mc, approx_mc_core, compute_pivot, compute_t, find_median
from .hashfamily import encode_constraint, eval_hash, make_config, sample_cell, sample_hash
from .oracle import BoundedResult, OracleConfig, bounded_smt

__version__ = "0.1.0"
