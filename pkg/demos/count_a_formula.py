"""
Approximate counting, one formula
=================================

Parse a small SMT-LIB2 problem, count it exactly, then estimate the count
with random word-level hash constraints and compare.
"""

from collections import Counter

from smtcount import approx_mc, parse_smt2
from smtcount.validate import eps_obs, exact_count

text = """
(declare-fun a () (_ BitVec 6))
(declare-fun b () (_ BitVec 6))
(declare-fun c () (_ BitVec 6))
(assert (= (bvadd a b) c))
(assert (= ((_ extract 5 4) a) #b00))
"""
f = parse_smt2(text)

# 16 choices of a, 64 of b, and c is forced.
exact = exact_count(f)
print("exact count:", exact)

# Tolerance 0.8 and confidence 0.8 give pivot 4 and 137 core runs.
est = approx_mc(f, epsilon=0.8, delta=0.2, seed=0)
print("estimate   :", est.final_count, f"(pivot {est.pivot}, t {est.t}, {est.successes} successful runs)")
print("eps_obs    :", float(eps_obs(exact, est.final_count)))

# What the individual core runs returned.
print(Counter(tr.value for tr in est.traces).most_common(8))

# Each run refines its hash until a random cell holds 1..pivot models.
tr = next(t for t in est.traces if t.outcome == "estimate")
for step in tr.steps:
    print(f"C={step.C}  cells={step.num_cells:>5}  models in cell={step.leaf}")
print("that run's estimate:", tr.leaf, "x", tr.num_cells, "=", tr.value)
