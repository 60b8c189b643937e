import numpy as np
import pytest

from spkit import random as sprandom


@pytest.fixture
def gen():
    return sprandom.rng(20240611)


def rel_fro(X, Y):
    X, Y = np.asarray(X), np.asarray(Y)
    return np.linalg.norm(X - Y) / max(np.linalg.norm(Y), 1e-300)


def fourier(n=1):
    """beta, the canonical Fourier-type element."""
    I, Z = np.eye(n), np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def record(request):
    """Record one acceptance line; printed again in the terminal summary."""
    def _record(tag: str, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
        request.config.stash[_ACCEPTANCE].append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
