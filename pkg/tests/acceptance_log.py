"""Verdict lines for the acceptance criteria, printed after the run."""

import time
from contextlib import contextmanager

import pytest

VERDICTS: dict[int, str] = {}


@contextmanager
def criterion(number, title):
    start = time.perf_counter()
    try:
        yield
    except pytest.skip.Exception as exc:
        VERDICTS[number] = f"SKIP  {number:>2}. {title}: {exc}"
        raise
    except BaseException as exc:
        VERDICTS[number] = f"FAIL  {number:>2}. {title}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        raise
    VERDICTS[number] = f"PASS  {number:>2}. {title} ({time.perf_counter() - start:.2f}s)"
