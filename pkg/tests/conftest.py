import time

import pytest

from reallinear.bench import DESK_DIMS, generate_problem, run_benchmark_traces


@pytest.fixture(scope="session")
def desk_problem():
    return generate_problem(0, *DESK_DIMS)


@pytest.fixture(scope="session")
def desk_run(desk_problem):
    """All four approaches and three solvers at desk scale, default iterations."""
    return run_benchmark_traces(desk_problem)


# --- acceptance reporting -------------------------------------------------------

_RESULTS = pytest.StashKey[dict]()


class _Criterion:
    """Context manager recording one acceptance criterion as PASS or FAIL."""

    def __init__(self, sink, number, title):
        self.sink, self.number, self.title = sink, number, title
        self.detail = ""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        seconds = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        detail = self.detail if exc_type is None else f"{self.detail} [{exc_type.__name__}: {exc}]"
        line = f"criterion {self.number} {status}: {self.title} ({seconds:.2f} s) {detail}".rstrip()
        self.sink[self.number] = line
        print(line)
        return False


@pytest.fixture
def criterion(request):
    sink = request.config.stash.setdefault(_RESULTS, {})
    return lambda number, title: _Criterion(sink, number, title)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
