import random

import pytest
from hypothesis import strategies as st

from clusteracc import Clustering

_VERDICTS: list[str] = []


def random_clustering(rng: random.Random, n: int, k: int, overlap: float = 0.0):
    """Random clustering of nodes 0..n-1 into at most k clusters.

    Each node joins one random cluster, plus a second one with probability
    ``overlap``. Empty clusters are dropped.
    """
    clusters = [[] for _ in range(k)]
    for v in range(n):
        first = rng.randrange(k)
        clusters[first].append(v)
        if k > 1 and rng.random() < overlap:
            second = rng.randrange(k - 1)
            clusters[second + (second >= first)].append(v)
    return Clustering(c for c in clusters if c)


@st.composite
def clusterings(draw, n_nodes=st.integers(2, 24), k=st.integers(1, 6),
                overlap=st.sampled_from([0.0, 0.3])):
    n = draw(n_nodes)
    seed = draw(st.integers(0, 2**32 - 1))
    return n, seed, draw(k), draw(overlap)


@st.composite
def clustering_pairs(draw, partitions=False):
    n = draw(st.integers(2, 24))
    ov = 0.0 if partitions else draw(st.sampled_from([0.0, 0.3, 0.8]))
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    a = random_clustering(rng, n, draw(st.integers(1, 6)), ov)
    b = random_clustering(rng, n, draw(st.integers(1, 6)), ov)
    return a, b


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion."""
    def record(criterion: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        _VERDICTS.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
