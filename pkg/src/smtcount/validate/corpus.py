"""Desk-scale benchmark corpus: handwritten cases plus seeded random formulas.

Every formula has at most 20 bits of assignment space so exact counts come
from plain enumeration.
"""

from __future__ import annotations

import random
from pathlib import Path

from .. import bvformula as bv

HANDWRITTEN = {
    "single": """
        (declare-fun x () (_ BitVec 8))
        (assert (= x #x03))""",
    "unsat": """
        (declare-fun x () (_ BitVec 4))
        (assert (bvult x #x0))""",
    "four": """
        (declare-fun x () (_ BitVec 4))
        (assert (bvult x #x4))""",
    "pair_product": """
        (declare-fun x () (_ BitVec 4))
        (declare-fun y () (_ BitVec 4))
        (assert (= (bvmul ((_ zero_extend 4) x) ((_ zero_extend 4) y)) #x0c))""",
    "nibble_64": """
        (declare-fun x () (_ BitVec 8))
        (declare-fun y () (_ BitVec 4))
        (assert (bvult x #x10))
        (assert (= ((_ extract 3 2) y) #b00))""",
    "affine_256": """
        (declare-fun x () (_ BitVec 8))
        (declare-fun y () (_ BitVec 8))
        (assert (= (bvadd (bvmul x #x03) #x11) y))""",
    "residue_mod7": """
        (declare-fun x () (_ BitVec 8))
        (declare-fun y () (_ BitVec 4))
        (assert (= (bvurem x #x07) #x03))
        (assert (bvuge y #x6))""",
    "squares_low": """
        (declare-fun x () (_ BitVec 8))
        (declare-fun y () (_ BitVec 8))
        (assert (= (bvmul x x) y))
        (assert (bvult y #x40))""",
    "sum3_1024": """
        (declare-fun a () (_ BitVec 6))
        (declare-fun b () (_ BitVec 6))
        (declare-fun c () (_ BitVec 6))
        (assert (= (bvadd a b) c))
        (assert (= ((_ extract 5 4) a) #b00))""",
    "disjoint_bits": """
        (declare-fun x () (_ BitVec 8))
        (declare-fun y () (_ BitVec 8))
        (assert (= (bvand x y) #x00))""",
    "mixed_widths": """
        (declare-fun a () (_ BitVec 2))
        (declare-fun b () (_ BitVec 6))
        (declare-fun c () (_ BitVec 8))
        (assert (bvugt (concat a b) c))
        (assert (not (= a #b11)))""",
    "ordered_pair": """
        (declare-fun x () (_ BitVec 8))
        (declare-fun y () (_ BitVec 8))
        (declare-fun z () (_ BitVec 4))
        (assert (bvule x y))""",
    "ite_branch": """
        (declare-fun x () (_ BitVec 6))
        (declare-fun y () (_ BitVec 6))
        (assert (= (ite (bvult x #b100000) (bvadd x y) (bvxor x y)) #b010101))
        (assert (or (bvult y #b001000) (bvugt x #b110000)))""",
}


def handwritten() -> dict[str, bv.Formula]:
    return {name: bv.parse_smt2(text) for name, text in HANDWRITTEN.items()}


def _random_term(rng: random.Random, names: list[bv.Term], width: int, depth: int) -> bv.Term:
    pick = rng.random()
    if depth == 0 or pick < 0.3:
        leaf = rng.choice(names)
        return _fit(rng, leaf, width)
    if pick < 0.4:
        return bv.const(rng.randrange(1 << width), width)
    op = rng.choice(["bvadd", "bvmul", "bvand", "bvor", "bvxor", "bvurem", "bvnot", "extract"])
    if op == "bvnot":
        return bv.bvnot(_random_term(rng, names, width, depth - 1))
    if op == "extract":
        inner = _random_term(rng, names, min(8, width + rng.randrange(1, 4)), depth - 1)
        lo = rng.randrange(inner.width - width + 1)
        return bv.extract(inner, lo, lo + width - 1)
    a = _random_term(rng, names, width, depth - 1)
    if op == "bvurem":
        return bv.bvurem(a, bv.const(rng.randrange(2, 1 << width) if width > 1 else 1, width))
    b = _random_term(rng, names, width, depth - 1)
    return getattr(bv, op)(a, b)


def _fit(rng, t: bv.Term, width: int) -> bv.Term:
    if t.width == width:
        return t
    if t.width > width:
        lo = rng.randrange(t.width - width + 1)
        return bv.extract(t, lo, lo + width - 1)
    return bv.zero_extend(t, width - t.width)


def random_formula(rng: random.Random, max_bits: int = 20) -> bv.Formula:
    """A random formula over 1-3 variables of widths 2-8 and 1-3 atoms."""
    while True:
        n = rng.randint(1, 3)
        widths = [rng.randint(2, 8) for _ in range(n)]
        if sum(widths) <= max_bits:
            break
    support = [bv.Variable("xyz"[i], w) for i, w in enumerate(widths)]
    leaves = [bv.var_of(v) for v in support]
    atoms = []
    for _ in range(rng.randint(1, 3)):
        width = rng.choice(widths)
        lhs = _random_term(rng, leaves, width, 2)
        rhs = (
            bv.const(rng.randrange(1 << width), width)
            if rng.random() < 0.5
            else _random_term(rng, leaves, width, 1)
        )
        op = rng.choice(["=", "bvult", "bvule", "bvugt", "bvuge"])
        atom = bv.terms._compare(op, lhs, rhs)
        atoms.append(bv.not_(atom) if rng.random() < 0.2 else atom)
    return bv.Formula.build(support, bv.and_(*atoms))


def generated(count: int, seed: int = 2016, min_models: int = 1) -> dict[str, bv.Formula]:
    from .exact import exact_count

    rng = random.Random(seed)
    out = {}
    while len(out) < count:
        f = random_formula(rng)
        if exact_count(f) >= min_models:
            out[f"gen{len(out):02d}"] = f
    return out


def desk_corpus() -> dict[str, bv.Formula]:
    """The 30-formula acceptance corpus (13 handwritten, 17 generated)."""
    corpus = handwritten()
    corpus.update(generated(30 - len(corpus)))
    return corpus


def load_corpus(directory: str | Path) -> dict[str, bv.Formula]:
    return {p.stem: bv.parse_smt2(p.read_text()) for p in sorted(Path(directory).glob("*.smt2"))}


def write_corpus(corpus: dict[str, bv.Formula], directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, f in corpus.items():
        (directory / f"{name}.smt2").write_text(bv.print_smt2(f, check_sat=True))
