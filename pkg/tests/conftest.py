import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from covphase import IndexWindow, normalize_arcs, random_gram_matrix  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def random_arc_set(rng, max_arcs=3):
    k = int(rng.integers(1, max_arcs + 1))
    pairs = []
    for _ in range(k):
        start = rng.uniform(0, 2 * np.pi)
        pairs.append((start, start + rng.uniform(0.05, 2.0)))
    return normalize_arcs(pairs)


def random_corpus(count, window, seed=0):
    """Random valid phase matrices with varied ranks (d from 1 up to window size)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        d = int(rng.integers(1, window.size + 1))
        out.append(random_gram_matrix(window, d, seed=1000 * seed + i))
    return out


@pytest.fixture(scope="session")
def corpus():
    return random_corpus(25, IndexWindow(-8, 8), seed=7)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
