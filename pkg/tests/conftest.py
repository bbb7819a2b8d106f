"""Shared oracles: mpmath at high working precision and naive integer loops.

They deliberately avoid the package's own interval code so that
agreement is evidence rather than tautology.
"""
import itertools

import mpmath
import pytest

ACCEPTANCE_LINES = []


def plain_terms(kind, count):
    if kind == "jacobsthal":
        out = [0, 1]
        while len(out) < count:
            out.append(out[-1] + 2 * out[-2])
    else:
        out = [1, 1, 1] if kind == "padovan" else [3, 0, 2]
        while len(out) < count:
            out.append(out[-2] + out[-3])
    return out[:count]


def naive_solutions(kind, k_max, n_max):
    seq = plain_terms(kind, k_max + 1)
    jac = plain_terms("jacobsthal", n_max + 1)
    return sorted((k, n, m) for k, n, m in itertools.product(
        range(k_max + 1), range(n_max + 1), range(n_max + 1))
        if m <= n and seq[k] == jac[n] + jac[m])


def mp_root_system(dps=120):
    with mpmath.workdps(dps):
        alpha = mpmath.findroot(lambda x: x ** 3 - x - 1, mpmath.mpf("1.3247"))
        a = mpmath.findroot(lambda x: 23 * x ** 3 - 23 * x ** 2 + 6 * x - 1,
                            mpmath.mpf("0.7221"))
        tau = mpmath.log(alpha) / mpmath.log(2)
        return alpha, a, tau


def mp_cf(x, count, dps):
    out = []
    with mpmath.workdps(dps):
        for _ in range(count):
            q = int(mpmath.floor(x))
            out.append(q)
            x = 1 / (x - q)
    return out


@pytest.fixture(scope="session")
def root_system():
    return mp_root_system()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
