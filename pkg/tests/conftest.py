import os
import shlex
import shutil

import pytest

from smtcount.validate import desk_corpus


def solver_command():
    """External SMT-LIB2 solver for the process backend, if any.

    ``SMTCOUNT_SOLVER`` overrides discovery; an empty value disables it.
    """
    if "SMTCOUNT_SOLVER" in os.environ:
        return tuple(shlex.split(os.environ["SMTCOUNT_SOLVER"])) or None
    for name, args in (("z3", ("-in",)), ("cvc5", ("--lang=smt2", "--incremental")), ("yices-smt2", ("--incremental",))):
        if shutil.which(name):
            return (name, *args)
    return None


@pytest.fixture(scope="session")
def solver_cmd():
    cmd = solver_command()
    if cmd is None:
        pytest.skip("no external SMT solver found (install z3-solver or set SMTCOUNT_SOLVER)")
    return cmd


@pytest.fixture(scope="session")
def corpus():
    return desk_corpus()


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
