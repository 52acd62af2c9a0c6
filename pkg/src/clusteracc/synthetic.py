"""Seeded synthetic clusterings for scaling benchmarks."""
from __future__ import annotations

import numpy as np

from .model import Clustering

__all__ = ["generate_synthetic"]


def generate_synthetic(n: int, k: int, avg_membership: float = 1.0,
                       seed: int = 0) -> Clustering:
    """Random clustering of nodes ``0..n-1`` into ``k`` non-empty clusters.

    Every node gets one primary cluster (the first ``k`` nodes of a random
    permutation seed one cluster each). Extra memberships bring the total
    to ``round(avg_membership * n)``, each added to a node that is not yet
    in the chosen cluster.
    """
    if not (isinstance(n, (int, np.integer)) and isinstance(k, (int, np.integer))):
        raise TypeError("n and k must be integers")
    if k < 1 or n < k:
        raise ValueError(f"need n >= k >= 1, got n={n}, k={k}")
    if not 1.0 <= avg_membership <= k:
        raise ValueError(f"avg_membership must lie in [1, k], got {avg_membership}")
    rng = np.random.default_rng(seed)
    primary = np.empty(n, dtype=np.int64)
    perm = rng.permutation(n)
    primary[perm[:k]] = np.arange(k)
    primary[perm[k:]] = rng.integers(0, k, size=n - k)
    members: list[set[int]] = [set() for _ in range(k)]
    for node, c in enumerate(primary.tolist()):
        members[c].add(node)
    extra = int(round(avg_membership * n)) - n
    if extra > 0:
        # Candidate (node, cluster) slots outside the primary assignment.
        offsets = rng.integers(1, k, size=extra * 2 + 16)
        nodes = rng.integers(0, n, size=extra * 2 + 16)
        placed = 0
        i = 0
        while placed < extra:
            if i == len(nodes):
                offsets = rng.integers(1, k, size=extra + 16)
                nodes = rng.integers(0, n, size=extra + 16)
                i = 0
            node = int(nodes[i])
            c = int((primary[node] + offsets[i]) % k)
            i += 1
            if node not in members[c]:
                members[c].add(node)
                placed += 1
    return Clustering(sorted(m) for m in members)
