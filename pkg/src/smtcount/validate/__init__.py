"""Exact counting, accuracy reports and hash-law statistics."""

from .corpus import desk_corpus, generated, handwritten, load_corpus, random_formula, write_corpus
from .exact import exact_count
from .hashlaws import LawCheck, bonferroni_z, check_pairwise, check_uniformity, hash_law_suite
from .quality import CorpusReport, FormulaSummary, QualityRecord, eps_obs, run_quality_suite, within_tolerance
