import time

import pytest

from revrel.characterizations import run_matrix


@pytest.fixture(scope="session")
def matrix_run():
    """The full check-by-family matrix, computed once per test session.

    Yields (reports, elapsed_seconds); the timing is part of the
    acceptance surface, so it is captured at the only place the matrix
    is actually computed.
    """
    start = time.perf_counter()
    reports = run_matrix()
    elapsed = time.perf_counter() - start
    return reports, elapsed
