import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from conelab import profiles

settings.register_profile(
    "conelab",
    derandomize=True,
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("conelab")


@pytest.fixture(scope="session")
def euclid3():
    return profiles.euclidean(3)


@pytest.fixture(scope="session")
def asym():
    return profiles.asym_conical(0.8, 3)


@pytest.fixture(scope="session")
def ding3():
    return profiles.ding(3)


@pytest.fixture(scope="session")
def ni():
    return profiles.ni_metric()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# -- acceptance reporting ---------------------------------------------------------

_ACCEPTANCE_KEY = pytest.StashKey[list]()


class AcceptanceRecorder:
    """Times one acceptance criterion and records a one-line verdict."""

    def __init__(self, log):
        self.log = log

    def run(self, number, title, budget, body):
        import time

        start = time.perf_counter()
        error = None
        try:
            detail = body()
        except AssertionError as exc:
            detail, error = f"assertion failed: {exc}".splitlines()[0], exc
        elapsed = time.perf_counter() - start
        in_time = budget is None or elapsed < budget
        ok = error is None and in_time
        limit = "" if budget is None else f" < {budget:g} s"
        note = detail or ""
        if error is None and not in_time:
            note = f"too slow; {note}"
        self.log.append(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {elapsed:7.2f} s{limit:<9} "
                        f"{title}: {note}")
        if error is not None:
            raise error
        assert in_time, f"criterion {number} took {elapsed:.2f} s (budget {budget} s)"


@pytest.fixture
def acceptance(request):
    return AcceptanceRecorder(request.config.stash.setdefault(_ACCEPTANCE_KEY, []))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
