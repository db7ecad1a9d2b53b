import numpy as np
import pytest

from greedyrelay.model import AwgnNetwork, DmcNetwork, InputDistributions


def unit_awgn(n=2, snr=1.0):
    g = np.ones((n, n)) - np.eye(n)
    return AwgnNetwork(n, g * snr, np.ones(n), 1.0)


def random_awgn(rng, n):
    g = rng.exponential(1.0, size=(n, n))
    np.fill_diagonal(g, 0.0)
    return AwgnNetwork(n, g, rng.uniform(0.1, 4.0, size=n), float(rng.uniform(0.2, 2.0)))


def random_dmc(rng, sizes, out_sizes=None):
    n = len(sizes)
    rows = int(np.prod(sizes))
    out_sizes = out_sizes or [2] * n
    chans = tuple(rng.dirichlet(np.ones(m), size=rows) for m in out_sizes)
    return DmcNetwork(n, tuple(sizes), chans)


def random_dists(rng, sizes):
    return InputDistributions(tuple(rng.dirichlet(np.ones(s)) for s in sizes))


def deterministic_dmc(sizes, fns, out_sizes):
    """Receiver i outputs fns[i](x) for the input tuple x."""
    n = len(sizes)
    configs = list(np.ndindex(*sizes))
    chans = []
    for i in range(n):
        t = np.zeros((len(configs), out_sizes[i]))
        for r, x in enumerate(configs):
            t[r, fns[i](x)] = 1.0
        chans.append(t)
    return DmcNetwork(n, tuple(sizes), tuple(chans))


def bsc_pair(eps):
    """Node 1 hears node 2 through BSC(eps); node 2 hears node 1 noiselessly."""
    rows = []
    for x1, x2 in np.ndindex(2, 2):
        rows.append([1 - eps, eps] if x2 == 0 else [eps, 1 - eps])
    ch1 = np.array(rows)
    ch2 = np.array([[1.0, 0.0] if x1 == 0 else [0.0, 1.0] for x1, x2 in np.ndindex(2, 2)])
    return DmcNetwork(2, (2, 2), (ch1, ch2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
