import itertools
import math
import random
from collections import Counter
from statistics import NormalDist

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smtcount import bvformula as bv
from smtcount.hashfamily import (
    Cell,
    HashComponent,
    HashFunction,
    SliceRef,
    accumulator_width,
    encode_constraint,
    eval_hash,
    make_config,
    num_levels,
    sample_cell,
    sample_hash,
    slice_layout,
)
from smtcount.modmath import Prime


def trial_division_prime_geq(n):
    def prime(m):
        return m >= 2 and all(m % d for d in range(2, math.isqrt(m) + 1))

    while not prime(n):
        n += 1
    return n


def chi2_critical(df, alpha=1e-3):
    """Wilson-Hilferty approximation to the upper chi-squared quantile."""
    z = NormalDist().inv_cdf(1 - alpha)
    a = 2 / (9 * df)
    return df * (1 - a + z * math.sqrt(a)) ** 3


def chi2(counts, support, total):
    e = total / len(support)
    return sum((counts[v] - e) ** 2 / e for v in support)


def support_for(n, k):
    return [bv.Variable(f"x{i}", k) for i in range(n)]


# -- configuration

def test_config_example_k8():
    cfg = make_config(2, 8, (0, 1))
    assert cfg.primes[0].value == 257 and cfg.primes[1].value == 17
    assert cfg.C[:2] == (0, 1)
    assert len(sample_hash(cfg, random.Random(0)).components) == 1


def test_config_k1_is_xor_family():
    cfg = make_config(3, 1, (4,))
    assert [p.value for p in cfg.primes] == [2]
    h = sample_hash(cfg, random.Random(0))
    assert len(h.components) == 4 and set(h.moduli) == {2}


def test_config_non_power_of_two():
    cfg = make_config(1, 6, (0, 1))
    assert cfg.primes[1].value == 11
    assert [s.width for s in slice_layout(cfg, 1)] == [3, 3]


@pytest.mark.parametrize("k", range(1, 40))
def test_primes_match_trial_division(k):
    cfg = make_config(1, k, (1,))
    for j, p in enumerate(cfg.primes):
        w = -(-k // 2**j)
        assert p.value == trial_division_prime_geq(2**w)
        assert p.value >= 2**w  # no aliasing
    assert cfg.primes[-1].value == 2
    values = [p.value for p in cfg.primes]
    assert values == sorted(values, reverse=True)


def test_config_errors():
    with pytest.raises(ValueError):
        make_config(2, 8, ())
    with pytest.raises(ValueError):
        make_config(2, 8, (1,) * (num_levels(8) + 1))
    with pytest.raises(ValueError):
        make_config(0, 8, (1,))
    with pytest.raises(ValueError):
        make_config(2, 8, (-1,))


def test_num_cells_is_exact_product():
    cfg = make_config(2, 8, (1, 2, 0, 3))
    assert cfg.num_cells() == 257 * 17**2 * 2**3


# -- slicing

def test_slice_layout_index_formula():
    cfg = make_config(2, 8, (0, 1))
    assert slice_layout(cfg, 1)[3] == SliceRef(1, 4, 7)


@pytest.mark.parametrize("n,k", [(1, 1), (2, 2), (3, 4), (2, 8), (1, 16)])
def test_slice_layout_power_of_two(n, k):
    cfg = make_config(n, k, (1,))
    for j in range(cfg.levels):
        layout = slice_layout(cfg, j)
        assert len(layout) == n * 2**j
        w = k // 2**j
        for m, s in enumerate(layout):
            assert s == SliceRef(m // 2**j, (m % 2**j) * w, (m % 2**j) * w + w - 1)


def test_slice_layout_whole_words_and_bits():
    cfg = make_config(3, 5, (1,))
    assert slice_layout(cfg, 0) == tuple(SliceRef(i, 0, 4) for i in range(3))
    assert slice_layout(make_config(1, 4, (1,)), 2) == tuple(SliceRef(0, b, b) for b in range(4))


@pytest.mark.parametrize("k", [3, 5, 6, 7, 9, 12])
def test_slice_layout_tiles_every_word(k):
    cfg = make_config(2, k, (1,))
    for j in range(cfg.levels):
        for i in range(2):
            bits = [b for s in slice_layout(cfg, j) if s.var_index == i for b in range(s.lo, s.hi + 1)]
            assert bits == list(range(k))


def test_slice_layout_level_out_of_range():
    with pytest.raises(ValueError):
        slice_layout(make_config(1, 4, (1,)), 3)


# -- sampling

def test_sample_structure():
    cfg = make_config(2, 8, (0, 1))
    h = sample_hash(cfg, random.Random(3))
    (c,) = h.components
    assert c.modulus.value == 17 and len(c.coeffs) == 4 == len(c.slices)
    assert all(0 <= a < 17 for a in c.coeffs) and 0 <= c.offset < 17


def test_empty_hash_and_cell():
    h = sample_hash(make_config(2, 4, (0, 0)), random.Random(0))
    assert h.components == ()
    assert sample_cell(h, random.Random(0)).target == ()
    assert eval_hash(h, [1, 2]) == ()
    assert encode_constraint(h, Cell(()), support_for(2, 4)) == bv.TRUE


def test_sampling_is_reproducible():
    cfg = make_config(2, 8, (1, 1, 1))
    assert sample_hash(cfg, random.Random(9)) == sample_hash(cfg, random.Random(9))


def test_sampled_coefficients_are_uniform():
    cfg = make_config(2, 8, (0, 1))
    rng = random.Random(11)
    slots = [Counter() for _ in range(5)]
    draws = 100_000
    for _ in range(draws):
        (c,) = sample_hash(cfg, rng).components
        for slot, v in zip(slots, c.coeffs + (c.offset,)):
            slot[v] += 1
    crit = chi2_critical(16)
    for slot in slots:
        assert chi2(slot, range(17), draws) < crit


def test_sampled_cells_are_uniform():
    h = sample_hash(make_config(1, 4, (1, 1)), random.Random(0))
    assert h.moduli == (17, 5)
    rng = random.Random(5)
    draws = 100_000
    counts = Counter(sample_cell(h, rng).target for _ in range(draws))
    cells = list(itertools.product(range(17), range(5)))
    assert all(0 <= a < 17 and 0 <= b < 5 for a, b in counts)
    assert chi2(counts, cells, draws) < chi2_critical(len(cells) - 1)


# -- evaluation

def test_eval_hash_hand_example():
    p = Prime(17)
    comp = HashComponent(0, p, (SliceRef(0, 0, 3), SliceRef(1, 0, 3)), (3, 5), 7)
    h = HashFunction(make_config(2, 4, (1,)), (comp,))
    assert eval_hash(h, [9, 12]) == (9,)  # 27 + 60 + 7 = 94 = 5*17 + 9
    assert eval_hash(h, {"a": 9, "b": 12}) == (9,)


def test_eval_hash_width_errors():
    h = sample_hash(make_config(2, 4, (1,)), random.Random(0))
    with pytest.raises(bv.WidthError):
        eval_hash(h, [16, 0])
    with pytest.raises(ValueError):
        eval_hash(h, [1])


@settings(max_examples=100, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 12),
    st.lists(st.integers(0, 2), min_size=1, max_size=3),
    st.integers(0, 2**32),
)
def test_eval_hash_range_and_vector_agreement(n, k, C, seed):
    C = C[: num_levels(k)]
    rng = random.Random(seed)
    h = sample_hash(make_config(n, k, C), rng)
    xs = [[rng.randrange(2**k) for _ in range(20)] for _ in range(n)]
    vec = eval_hash(h, [np.array(col) for col in xs])
    for r in range(20):
        out = eval_hash(h, [col[r] for col in xs])
        assert all(0 <= v < m for v, m in zip(out, h.moduli))
        assert out == tuple(int(col[r]) for col in vec)


def test_eval_hash_matches_plain_arithmetic():
    rng = random.Random(1)
    cfg = make_config(3, 7, (1, 1, 1, 1))
    for _ in range(200):
        h = sample_hash(cfg, rng)
        x = [rng.randrange(128) for _ in range(3)]
        expected = []
        for c in h.components:
            s = sum(a * ((x[sl.var_index] >> sl.lo) & ((1 << sl.width) - 1)) for a, sl in zip(c.coeffs, c.slices))
            expected.append((s + c.offset) % c.modulus.value)
        assert eval_hash(h, x) == tuple(expected)


# -- encoding

def test_accumulator_width_example():
    assert accumulator_width(Prime(17), 1) == 11


def test_encoding_single_variable_exhaustive():
    support = support_for(1, 4)
    h = HashFunction(
        make_config(1, 4, (1,)),
        (HashComponent(0, Prime(17), (SliceRef(0, 0, 3),), (13,), 9),),
    )
    for alpha in range(17):
        f = bv.Formula.build(support, encode_constraint(h, Cell((alpha,)), support))
        hits = [x for x in range(16) if bv.evaluate(f, {"x0": x})]
        assert hits == [x for x in range(16) if (13 * x + 9) % 17 == alpha]


def test_encoding_is_overflow_free_at_extremes():
    """All-maximal coefficients and inputs must not wrap the accumulator."""
    n, k = 4, 16
    cfg = make_config(n, k, (1,))
    p = cfg.primes[0]
    layout = slice_layout(cfg, 0)
    h = HashFunction(cfg, (HashComponent(0, p, layout, (p.value - 1,) * n, p.value - 1),))
    x = [2**k - 1] * n
    support = support_for(n, k)
    (target,) = eval_hash(h, x)
    f = bv.Formula.build(support, encode_constraint(h, Cell((target,)), support))
    assert bv.evaluate(f, dict(zip(f.names, x)))
    f_wrong = bv.Formula.build(support, encode_constraint(h, Cell(((target + 1) % p.value,)), support))
    assert not bv.evaluate(f_wrong, dict(zip(f.names, x)))


def test_encoding_agrees_with_eval_hash_random():
    rng = random.Random(2024)
    for _ in range(10_000 // 50):
        n, k = rng.randint(1, 4), rng.randint(1, 20)
        C = [rng.randint(0, 2) for _ in range(rng.randint(1, num_levels(k)))]
        h = sample_hash(make_config(n, k, C), rng)
        cell = sample_cell(h, rng)
        support = support_for(n, k)
        f = bv.Formula.build(support, encode_constraint(h, cell, support))
        cols = [np.array([rng.randrange(2**k) for _ in range(50)], dtype=np.uint64) for _ in range(n)]
        got = bv.evaluate_many(f, dict(zip(f.names, cols)), 50)
        hv = eval_hash(h, cols)
        want = np.ones(50, dtype=bool)
        for comp_vals, a in zip(hv, cell.target):
            want &= np.asarray(comp_vals).astype(np.int64) == a
        assert np.array_equal(np.asarray(got, dtype=bool), want)


def test_encoding_rejects_mismatched_inputs():
    h = sample_hash(make_config(2, 4, (1,)), random.Random(0))
    with pytest.raises(ValueError):
        encode_constraint(h, Cell(()), support_for(2, 4))
    with pytest.raises(bv.WidthError):
        encode_constraint(h, Cell((0,)), support_for(2, 5))


def test_encoding_prints_as_smtlib():
    rng = random.Random(0)
    h = sample_hash(make_config(2, 8, (1, 1)), rng)
    support = support_for(2, 8)
    f = bv.Formula.build(support, encode_constraint(h, sample_cell(h, rng), support))
    text = bv.print_smt2(f)
    assert "bvurem" in text and "zero_extend" in text
    assert bv.parse_smt2(text) == f
