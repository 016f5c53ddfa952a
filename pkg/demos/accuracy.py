"""
How close are the estimates?
============================

Run the counter over part of the desk corpus with a few seeds and print
the exact-versus-estimated table.  The full 50-seed run lives in the
acceptance tests.
"""

import numpy as np

from smtcount.validate import desk_corpus, run_quality_suite

corpus = desk_corpus()
names = ["four", "nibble_64", "pair_product", "affine_256", "residue_mod7", "sum3_1024", "gen00", "gen05"]
report = run_quality_suite({n: corpus[n] for n in names}, epsilon=0.8, delta=0.2, seeds=range(3))
print(report.to_table())

# Ratio of each run's estimate to the truth, on a log2 scale.
ratios = np.array([r.estimate / r.exact for r in report.records if r.estimate and r.exact])
print("log2(estimate / exact): mean %.3f  min %.3f  max %.3f" % tuple(
    f(np.log2(ratios)) for f in (np.mean, np.min, np.max)))
