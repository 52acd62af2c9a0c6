"""Omega Index and Soft Omega Index.

Both indices count node pairs by how many clusters of each clustering
contain the pair (``gn`` for the ground truth, ``cn`` for the candidate)
and correct the observed agreement for chance:

    value = (observed - expected) / (1 - expected)

The hard index credits a pair only when ``gn == cn``. The soft index also
credits near misses with ``min(gn, cn) / max(gn, cn)`` and corrects the
expected agreement by adding the raw tail of the longer ranked pair-count
sequence.

Every computation goes through a histogram of ``(gn, cn)`` combinations with
exact integer counts, so results do not depend on how the pair space is split
between workers.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateInputError,
    SaturatedExpectationError,
    UniverseMismatchError,
)
from .model import NodeIndex, build_node_index, check_clustering_pair

__all__ = ["OmegaScore", "PairProfile", "omega", "omega_soft", "pair_histogram",
           "pair_profile"]

# Below this many nodes the literal pair loop beats sparse products.
LOOP_MAX_NODES = 96
BLOCK_ROWS = 256


@dataclass(frozen=True)
class PairProfile:
    ranked_gt: tuple[int, ...]
    ranked_cand: tuple[int, ...]
    agreed: float
    total_pairs: int


@dataclass(frozen=True)
class OmegaScore:
    value: float
    observed: float
    expected: float

    def __float__(self) -> float:
        return self.value


def _check_indices(gt_index: NodeIndex, cand_index: NodeIndex) -> np.ndarray:
    if gt_index.relations.keys() != cand_index.relations.keys():
        only_gt = len(gt_index.relations.keys() - cand_index.relations.keys())
        only_cand = len(cand_index.relations.keys() - gt_index.relations.keys())
        raise UniverseMismatchError(only_gt, only_cand)
    if len(gt_index) < 2:
        raise DegenerateInputError("degenerate input: fewer than 2 nodes")
    return gt_index.nodes()


def _histogram_loop(gt_index, cand_index, nodes) -> Counter:
    grel = [frozenset(gt_index.relations[n]) for n in nodes.tolist()]
    crel = [frozenset(cand_index.relations[n]) for n in nodes.tolist()]
    hist = Counter()
    n = len(nodes)
    for i in range(n):
        gi, ci = grel[i], crel[i]
        for j in range(i + 1, n):
            hist[len(gi & grel[j]), len(ci & crel[j])] += 1
    return hist


def _histogram_block(mg, mgt, mc, mct, lo, hi, n, base):
    g = (mg[lo:hi] @ mgt).tocoo()
    c = (mc[lo:hi] @ mct).tocoo()
    g_keep = g.col > g.row + lo
    c_keep = c.col > c.row + lo
    # One code per pair: gn * base + cn. Pairs absent from both are (0, 0).
    key_g = g.row[g_keep].astype(np.int64) * n + g.col[g_keep]
    key_c = c.row[c_keep].astype(np.int64) * n + c.col[c_keep]
    keys = np.concatenate([key_g, key_c])
    vals = np.concatenate([g.data[g_keep] * base, c.data[c_keep]])
    hist = Counter()
    if len(keys):
        order = np.argsort(keys, kind="stable")
        keys, vals = keys[order], vals[order]
        starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
        codes = np.add.reduceat(vals, starts)
        uniq, counts = np.unique(codes, return_counts=True)
        for code, cnt in zip(uniq.tolist(), counts.tolist()):
            hist[divmod(code, base)] += cnt
    else:
        starts = ()
    rows = np.arange(lo, hi)
    pairs = int((n - 1 - rows).sum())
    zero = pairs - len(starts)
    if zero:
        hist[0, 0] += zero
    return hist


def _histogram_blocked(gt_index, cand_index, nodes, workers=1) -> Counter:
    mg = gt_index.membership_matrix(nodes)
    mc = cand_index.membership_matrix(nodes)
    mgt, mct = mg.T.tocsc(), mc.T.tocsc()
    n = len(nodes)
    base = cand_index.n_clusters + 1
    bounds = [(lo, min(lo + BLOCK_ROWS, n)) for lo in range(0, n, BLOCK_ROWS)]

    def work(b):
        return _histogram_block(mg, mgt, mc, mct, b[0], b[1], n, base)

    hist = Counter()
    if workers <= 1:
        for b in bounds:
            hist.update(work(b))
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for h in ex.map(work, bounds):
                hist.update(h)
    return hist


def pair_histogram(gt_index: NodeIndex, cand_index: NodeIndex, *,
                   workers: int = 1, method: str = "auto") -> Counter:
    """Count node pairs by ``(gn, cn)``.

    ``method`` is ``"loop"`` (direct pair enumeration), ``"blocked"``
    (sparse co-membership products over row blocks, parallelizable over
    ``workers`` threads) or ``"auto"``.
    """
    nodes = _check_indices(gt_index, cand_index)
    if method == "auto":
        method = "loop" if len(nodes) <= LOOP_MAX_NODES else "blocked"
    if method == "loop":
        return _histogram_loop(gt_index, cand_index, nodes)
    if method == "blocked":
        return _histogram_blocked(gt_index, cand_index, nodes, workers)
    raise ValueError(f"unknown method {method!r}")


def _soft_weight(gn: int, cn: int) -> float:
    if gn == cn:
        return 1.0
    if gn == 0 or cn == 0:
        return 0.0
    return min(gn, cn) / max(gn, cn)


def _profile_from_histogram(hist: Counter, n_gt: int, n_cand: int,
                            n_nodes: int, soft: bool) -> PairProfile:
    # Ranked sequences are sized by cluster counts, growing only when a pair
    # is shared by every cluster of a clustering.
    max_g = max(g for g, _ in hist)
    max_c = max(c for _, c in hist)
    ranked_gt = [0] * max(n_gt, max_g + 1)
    ranked_cand = [0] * max(n_cand, max_c + 1)
    agreed = 0.0
    for (g, c) in sorted(hist):
        cnt = hist[g, c]
        ranked_gt[g] += cnt
        ranked_cand[c] += cnt
        if soft:
            agreed += cnt * _soft_weight(g, c)
        elif g == c:
            agreed += cnt
    return PairProfile(tuple(ranked_gt), tuple(ranked_cand), float(agreed),
                       n_nodes * (n_nodes - 1) // 2)


def pair_profile(gt_index: NodeIndex, cand_index: NodeIndex, soft: bool = False,
                 *, workers: int = 1, method: str = "auto") -> PairProfile:
    hist = pair_histogram(gt_index, cand_index, workers=workers, method=method)
    return _profile_from_histogram(hist, gt_index.n_clusters,
                                   cand_index.n_clusters, len(gt_index), soft)


def _score(observed_pairs: float, expected_num: int, total_pairs: int) -> OmegaScore:
    """Chance-corrected score; ``expected_num / total_pairs**2`` is Exp."""
    p2 = total_pairs * total_pairs
    observed = observed_pairs / total_pairs
    expected = expected_num / p2
    if expected_num == p2:
        if observed_pairs == total_pairs:
            return OmegaScore(1.0, observed, expected)
        raise SaturatedExpectationError()
    value = (observed - expected) / (1.0 - expected)
    return OmegaScore(value + 0.0, observed, expected)


def _expected_hard(p: PairProfile) -> int:
    return sum(a * b for a, b in zip(p.ranked_gt, p.ranked_cand))


def _expected_soft(p: PairProfile) -> int:
    ngs, ncs = p.ranked_gt, p.ranked_cand
    szmin = min(len(ngs), len(ncs))
    nexp = sum(ngs[i] * ncs[i] for i in range(szmin))
    rns = ngs if len(ngs) > szmin else ncs
    nexp += sum(rns[szmin:])
    return nexp


def _profiles(gt, cand, soft, workers, method):
    gt, cand = check_clustering_pair(gt, cand)
    gi, ci = build_node_index(gt), build_node_index(cand)
    return pair_profile(gi, ci, soft, workers=workers, method=method)


def omega(gt, cand, *, workers: int = 1, method: str = "auto") -> OmegaScore:
    """Omega Index of ``cand`` against the ground truth ``gt``.

    Both clusterings must cover the same node universe (at least 2 nodes).

    Raises
    ------
    SaturatedExpectationError
        If the expected agreement equals one while the observed one does not.
    """
    p = _profiles(gt, cand, False, workers, method)
    return _score(p.agreed, _expected_hard(p), p.total_pairs)


def omega_soft(gt, cand, *, workers: int = 1, method: str = "auto") -> OmegaScore:
    """Soft Omega Index: partial credit for pairs shared by different counts."""
    p = _profiles(gt, cand, True, workers, method)
    return _score(p.agreed, _expected_soft(p), p.total_pairs)
