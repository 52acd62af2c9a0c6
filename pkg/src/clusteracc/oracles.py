"""Brute-force reference implementations for cross-checking the fast paths.

Everything here favors clarity over speed and works on plain Python sets.
Nothing is shared with the metric modules beyond input validation.
Intended for inputs of at most a few hundred nodes.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass

from .model import ContributionMode, check_clustering_pair

__all__ = ["OracleReport", "ari_oracle", "compare", "naive_mean_f1",
           "naive_nmi", "naive_omega"]


@dataclass(frozen=True)
class OracleReport:
    metric: str
    oracle: float
    fast: float

    @property
    def diff(self) -> float:
        return abs(self.oracle - self.fast)


def compare(metric: str, oracle: float, fast: float) -> OracleReport:
    return OracleReport(metric, float(oracle), float(fast))


def _sets(c):
    return [set(cl.members) for cl in c.clusters]


def _comb2(x: int) -> int:
    return x * (x - 1) // 2


def ari_oracle(gt, cand) -> float:
    """Classical Adjusted Rand Index from an explicit contingency table.

    >>> ari_oracle([[1, 2], [3, 4]], [[1, 3], [2, 4]])
    -0.5
    """
    gt, cand = check_clustering_pair(gt, cand)
    if not (gt.is_partition() and cand.is_partition()):
        raise ValueError("oracle requires partitions")
    a, b = _sets(gt), _sets(cand)
    n = sum(len(x) for x in a)
    index = sum(_comb2(len(x & y)) for x in a for y in b)
    sum_a = sum(_comb2(len(x)) for x in a)
    sum_b = sum(_comb2(len(y)) for y in b)
    total = _comb2(n)
    expected = Fraction(sum_a * sum_b, total)
    maximum = Fraction(sum_a + sum_b, 2)
    if maximum == expected:
        return 1.0
    return float((index - expected) / (maximum - expected))


def naive_omega(gt, cand, soft: bool = False) -> float:
    """Omega or Soft Omega by recounting every node pair directly."""
    gt, cand = check_clustering_pair(gt, cand)
    a, b = _sets(gt), _sets(cand)
    nodes = sorted(set().union(*a))
    pairs = list(itertools.combinations(nodes, 2))
    total = len(pairs)
    gn = [sum(1 for x in a if u in x and v in x) for u, v in pairs]
    cn = [sum(1 for y in b if u in y and v in y) for u, v in pairs]
    agreed = 0.0
    for g, c in zip(gn, cn):
        if g == c:
            agreed += 1
        elif soft and g and c:
            agreed += min(g, c) / max(g, c)
    observed = agreed / total
    # Pairs sharing exactly j clusters, for every j up to the cluster count.
    len_g = max(len(a), max(gn) + 1)
    len_c = max(len(b), max(cn) + 1)
    count_g = [gn.count(j) for j in range(len_g)]
    count_c = [cn.count(j) for j in range(len_c)]
    if soft:
        short = min(len_g, len_c)
        num = sum(count_g[j] * count_c[j] for j in range(short))
        num += sum(count_g[short:]) + sum(count_c[short:])
    else:
        num = sum(x * y for x, y in zip(count_g, count_c))
    if num == total * total:
        if agreed == total:
            return 1.0
        raise ValueError("undefined (expected agreement saturates)")
    expected = num / (total * total)
    return (observed - expected) / (1 - expected)


def _side(own, other, own_share, other_share, variant, ovp):
    """Average best-match score of the clusters of ``own``."""
    def mass(x):
        return sum(1.0 / own_share[v] for v in x) if ovp else float(len(x))

    scores, weights = [], []
    for x in own:
        wx = mass(x)
        best = 0.0
        for y in other:
            wy = (sum(1.0 / other_share[v] for v in y) if ovp
                  else float(len(y)))
            common = x & y
            if ovp:
                m = sum(1.0 / max(own_share[v], other_share[v]) for v in common)
            else:
                m = float(len(common))
            if variant == "f1p":
                s = math.sqrt(m * m / (wx * wy))
            else:
                s = 2 * m / (wx + wy)
            best = max(best, s)
        scores.append(best)
        weights.append(wx)
    return scores, weights


def naive_mean_f1(gt, cand, variant="f1h", mode="multires",
                  weighted: bool = False) -> float:
    """Mean F1 variant by comparing every cluster with every cluster."""
    gt, cand = check_clustering_pair(gt, cand)
    variant = str(getattr(variant, "value", variant)).lower()
    if variant not in ("f1a", "f1h", "f1p"):
        raise ValueError(f"unknown variant {variant!r}")
    ovp = ContributionMode.coerce(mode) is ContributionMode.OVERLAPPING
    a, b = _sets(gt), _sets(cand)
    share_a = {v: sum(1 for x in a if v in x) for x in a for v in x}
    share_b = {v: sum(1 for y in b if v in y) for y in b for v in y}
    sides = []
    for own, other, so, sx in ((a, b, share_a, share_b),
                               (b, a, share_b, share_a)):
        scores, weights = _side(own, other, so, sx, variant, ovp)
        if weighted:
            sides.append(sum(s * w for s, w in zip(scores, weights)) / sum(weights))
        else:
            sides.append(sum(scores) / len(scores))
    fg, fc = sides
    if variant == "f1a":
        return (fg + fc) / 2
    return 0.0 if fg + fc == 0 else 2 * fg * fc / (fg + fc)


def naive_nmi(gt, cand, norm: str = "max") -> float:
    """NMI in bits from the explicit (category, cluster) overlap table."""
    gt, cand = check_clustering_pair(gt, cand)
    a, b = _sets(gt), _sets(cand)
    table = [[len(x & y) for y in b] for x in a]
    total = sum(map(sum, table))
    rows = [sum(r) for r in table]
    cols = [sum(table[i][j] for i in range(len(a))) for j in range(len(b))]

    def h(ms):
        return -sum(m / total * math.log2(m / total) for m in ms if m)

    mi = 0.0
    for i, r in enumerate(table):
        for j, m in enumerate(r):
            if m:
                mi += m / total * math.log2(m * total / (rows[i] * cols[j]))
    hg, hc = h(rows), h(cols)
    denom = {"max": max(hg, hc), "avg": (hg + hc) / 2,
             "geo": math.sqrt(hg * hc)}[norm]
    if denom <= 0:
        raise ValueError("degenerate clustering (single cluster)")
    return mi / denom
