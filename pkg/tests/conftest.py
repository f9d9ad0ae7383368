import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from dedekind_residue import explicit_formula as ef  # noqa: E402
from dedekind_residue.splitting import sieve_primes  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

PRIME_CUTOFF = ef.DEFAULT_PRIME_CUTOFF


@pytest.fixture(scope="session")
def zeros():
    return ef.load_zeros(ef.bundled_zeros_path())


@pytest.fixture(scope="session")
def zeros1000(zeros):
    return zeros.head(1000)


@pytest.fixture(scope="session")
def zeros100(zeros):
    return zeros.head(100)


@pytest.fixture(scope="session")
def big_primes():
    return sieve_primes(PRIME_CUTOFF + 1)



def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: (int(k.split()[0].rstrip("ab")), k)):
        ok, detail = RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
