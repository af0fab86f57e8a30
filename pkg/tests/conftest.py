import sys

import numpy as np
import pytest

from hnormal import InnerProductSpace


def rel(A, B):
    """Frobenius distance of ``A`` from ``B`` relative to ``||B||`` (or absolute if B = 0)."""
    A, B = np.asarray(A), np.asarray(B)
    nb = np.linalg.norm(B)
    d = np.linalg.norm(A - B)
    return d / nb if nb > 0 else d


def admissible(n_values=range(2, 13)):
    """All ``(n, p, m)`` with ``0 <= p <= n`` and ``m <= min(p, n - p)``."""
    return [(n, p, m) for n in n_values for p in range(n + 1)
            for m in range(min(p, n - p) + 1)]


@pytest.fixture
def minkowski2():
    return InnerProductSpace(np.diag([1.0, -1.0]))


@pytest.fixture
def swap2():
    return np.array([[0.0, 1.0], [1.0, 0.0]])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get('test_acceptance')
    results = getattr(mod, 'RESULTS', None)
    if not results:
        return
    terminalreporter.section('acceptance criteria')
    for key, (ok, detail) in sorted(results.items()):
        terminalreporter.write_line('%s  criterion %s: %s' % ('PASS' if ok else 'FAIL', key, detail))
