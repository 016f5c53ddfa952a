"""Hypothesis strategies for random well-typed formulas."""

from functools import lru_cache

from hypothesis import strategies as st

from smtcount import bvformula as bv


@lru_cache(maxsize=None)
def terms(support, width, depth=3):
    leaves = [bv.var_of(v) for v in support if v.width == width]
    base = st.builds(bv.const, st.integers(0, 2**width - 1), st.just(width))
    if leaves:
        base = st.one_of(base, st.sampled_from(leaves))
    if depth == 0:
        return base

    def sub(w):
        return terms(support, w, depth - 1)

    options = [base]
    options.append(st.builds(lambda op, a, b: getattr(bv, op)(a, b),
                             st.sampled_from(["bvadd", "bvmul", "bvurem", "bvand", "bvor", "bvxor"]),
                             sub(width), sub(width)))
    options.append(st.builds(bv.bvnot, sub(width)))
    if width < 8:
        options.append(
            st.integers(0, 8 - width).flatmap(
                lambda lo: st.builds(lambda t: bv.extract(t, lo, lo + width - 1), sub(8))
            )
        )
    if width > 1:
        options.append(
            st.integers(1, width - 1).flatmap(lambda w: st.builds(bv.concat, sub(width - w), sub(w)))
        )
        options.append(st.integers(1, width - 1).flatmap(lambda w: st.builds(bv.zero_extend, sub(w), st.just(width - w))))
    options.append(st.builds(bv.ite, bools(support, depth - 1), sub(width), sub(width)))
    return st.one_of(options)


@lru_cache(maxsize=None)
def atoms(support, depth):
    return st.sampled_from([1, 2, 3, 4, 8]).flatmap(
        lambda w: st.builds(
            lambda op, a, b: bv.terms._compare(op, a, b),
            st.sampled_from(["=", "bvult", "bvule", "bvugt", "bvuge"]),
            terms(support, w, depth),
            terms(support, w, depth),
        )
    )


@lru_cache(maxsize=None)
def bools(support, depth=2):
    base = st.one_of(atoms(support, max(depth, 0)), st.sampled_from([bv.TRUE, bv.FALSE]))
    if depth <= 0:
        return base
    sub = bools(support, depth - 1)
    return st.one_of(
        base,
        st.builds(lambda xs: bv.and_(*xs), st.lists(sub, min_size=2, max_size=3)),
        st.builds(lambda xs: bv.or_(*xs), st.lists(sub, min_size=2, max_size=3)),
        st.builds(bv.not_, sub),
        st.builds(bv.ite, sub, sub, sub),
    )


SUPPORT = (bv.Variable("x", 4), bv.Variable("y", 3), bv.Variable("z", 8))


@st.composite
def formulas(draw, support=SUPPORT):
    conj = draw(st.lists(bools(support, 1), min_size=0, max_size=3))
    return bv.Formula.build(support, bv.and_(*conj))
