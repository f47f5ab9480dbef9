import numpy as np
import pytest

from vqhull import available_backends, get_backend


@pytest.fixture(params=available_backends())
def backend(request):
    return get_backend(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def left(u, p, q):
    # exact for the small integers used throughout the tests
    return (p[0] - u[0]) * (q[1] - u[1]) > (p[1] - u[1]) * (q[0] - u[0])


def dist_key(u, p, q):
    # larger means farther to the left of p -> q
    return (q[0] - p[0]) * u[1] - (q[1] - p[1]) * u[0]


def three_way(xs, ys, ea, eb):
    """Reference classification: (S1 list, S2 list) in input order."""
    s1, s2 = [], []
    for u in zip(xs.tolist(), ys.tolist()):
        if left(u, *ea):
            s1.append(u)
        elif left(u, *eb):
            s2.append(u)
    return s1, s2


def random_int_points(rng, n, lim):
    return (rng.integers(-lim, lim + 1, n).astype(np.float64),
            rng.integers(-lim, lim + 1, n).astype(np.float64))


# acceptance summary: one line per criterion, printed after the run
_ACCEPTANCE: list[tuple[str, str, str]] = []


class _Criterion:
    def __init__(self, label):
        self.label = label
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            status = "PASS"
        elif issubclass(exc_type, pytest.skip.Exception):
            status, self.detail = "SKIP", str(exc)
        else:
            status = "FAIL"
            if not self.detail:
                self.detail = f"{exc_type.__name__}: {exc}".splitlines()[0]
        _ACCEPTANCE.append((self.label, status, self.detail))
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{status:4}  {label}: {detail}")
