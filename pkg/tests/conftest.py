import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def rotation(n, rng):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def nondefinite_sym3(rng):
    """Random mixed-sign spectrum in a random frame."""
    lam = rng.standard_normal(3)
    while np.all(lam > 0) or np.all(lam < 0):
        lam = rng.standard_normal(3)
    Q = rotation(3, rng)
    return Q @ np.diag(lam) @ Q.T


def traceless(n, rng, symmetric=False):
    A = rng.standard_normal((n, n))
    if symmetric:
        A = (A + A.T) / 2
    return A - np.trace(A) / n * np.eye(n)


def plant_trace_condition(A, idx, rng):
    """Overwrite ``A[idx, idx]`` (0-based) so the trace lies between 0 and that entry."""
    A = np.array(A, dtype=float)
    rest = np.trace(A) - A[idx, idx]
    if abs(rest) < 1e-3:
        rest = 1.0 if rest >= 0 else -1.0
        A[(idx + 1) % A.shape[0], (idx + 1) % A.shape[0]] += rest
        rest = np.trace(A) - A[idx, idx]
    A[idx, idx] = -rest * (1 + rng.uniform(1, 3))
    return A


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
