import functools

import pytest

from coblekit.cli import run_check


@functools.lru_cache(maxsize=None)
def _cached(name: str, prime, seed):
    return run_check(name, prime=prime, seed=seed)


@pytest.fixture(scope="session")
def check():
    """Run a registered check once per session; later requests reuse the report."""

    def run(name: str, prime=None, seed=None):
        return _cached(name, prime, seed)

    return run


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
