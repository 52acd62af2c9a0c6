"""Mean F1 family: F1a, F1h and F1p.

Each cluster of one clustering is matched to its best counterpart in the
other clustering; the per-cluster best-match scores are averaged per
direction and the two directional averages are combined:

* F1a - arithmetic mean of the directional F1 averages,
* F1h - harmonic mean of the directional F1 averages,
* F1p - harmonic mean of the directional averages of ``sqrt(pprob)``.

Best matches are found in a single pass over the cluster members using
per-cluster match counters that are reset whenever a different cluster
starts feeding them, so the cost is proportional to the number of
(node, containing cluster) relations rather than to the product of the
cluster counts.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .model import (
    Clustering,
    ContributionMode,
    Contributions,
    NodeIndex,
    build_node_index,
    check_clustering_pair,
    compute_contributions,
)

__all__ = ["MatchVariant", "best_matches", "f1_sides", "match_f1",
           "match_pprob", "mean_f1"]


class MatchVariant(str, enum.Enum):
    F1A = "f1a"
    F1H = "f1h"
    F1P = "f1p"


def match_f1(m: float, w_gt: float, w_cand: float) -> float:
    """F1 of two clusters with matched mass ``m`` and weights ``w_gt``, ``w_cand``."""
    return 2.0 * m / (w_gt + w_cand)


def match_pprob(m: float, w_gt: float, w_cand: float) -> float:
    """Product of the two matched fractions, ``m/w_gt * m/w_cand``."""
    return m * m / (w_gt * w_cand)


def best_matches(target_index: NodeIndex, own_index: NodeIndex,
                 traversed: Clustering, target: Contributions,
                 own: Contributions, prob: bool = False,
                 ovp: bool = False) -> np.ndarray:
    """Best match score of every cluster of ``traversed`` in the target clustering.

    Parameters
    ----------
    target_index, own_index : NodeIndex
        Node indices of the counterpart clustering and of ``traversed``.
    traversed : Clustering
        Clustering whose clusters are scored.
    target, own : Contributions
        Cluster weights of the counterpart clustering and of ``traversed``.
    prob : bool
        Use ``pprob`` instead of F1 and emit the square root of each best.
    ovp : bool
        Overlapping semantics: a shared node adds
        ``1 / max(shares in target, shares in traversed)`` to a match
        instead of 1.

    Returns
    -------
    numpy.ndarray of shape (len(traversed),)
    """
    trel = target_index.relations
    orel = own_index.relations
    tw = target.weights.tolist()
    ow = own.weights.tolist()
    nt = target_index.n_clusters
    origin = [-1] * nt
    mass = [0.0] * nt
    out = np.empty(len(traversed.clusters), dtype=np.float64)
    for cl in traversed.clusters:
        cid = cl.id
        wc = ow[cid]
        bmt = 0.0
        for nd in cl.members:
            tcls = trel.get(nd)
            if not tcls:
                continue
            share = 1.0 / max(len(tcls), len(orel[nd])) if ovp else 1.0
            for t in tcls:
                if origin[t] != cid:
                    origin[t] = cid
                    m = mass[t] = share
                else:
                    m = mass[t] = mass[t] + share
                if prob:
                    mt = m * m / (tw[t] * wc)
                else:
                    mt = 2.0 * m / (tw[t] + wc)
                if bmt < mt:
                    bmt = mt
        out[cid] = math.sqrt(bmt) if prob else bmt
    return out


def _average(values: np.ndarray, weights: np.ndarray | None) -> float:
    if weights is None:
        return float(values.mean())
    return float((values * weights).sum() / weights.sum())


def f1_sides(gt, cand, prob: bool = False,
             mode=ContributionMode.MULTIRESOLUTION,
             weighted: bool = False) -> tuple[float, float]:
    """Directional averages ``(F_gt, F_cand)`` of the best-match scores.

    ``F_gt`` averages over ground-truth clusters (a recall), ``F_cand`` over
    candidate clusters (a precision). With ``weighted`` each cluster counts
    in proportion to its weight instead of uniformly.
    """
    gt, cand = check_clustering_pair(gt, cand)
    mode = ContributionMode.coerce(mode)
    ovp = mode is ContributionMode.OVERLAPPING
    gi, ci = build_node_index(gt), build_node_index(cand)
    gw = compute_contributions(gt, gi, ci, mode)
    cw = compute_contributions(cand, ci, gi, mode)
    bm_gt = best_matches(ci, gi, gt, cw, gw, prob, ovp)
    bm_cand = best_matches(gi, ci, cand, gw, cw, prob, ovp)
    return (_average(bm_gt, gw.weights if weighted else None),
            _average(bm_cand, cw.weights if weighted else None))


def _harmonic(a: float, b: float) -> float:
    s = a + b
    return 2.0 * a * b / s if s > 0 else 0.0


def mean_f1(gt, cand, variant=MatchVariant.F1H,
            mode=ContributionMode.MULTIRESOLUTION, *,
            weighted: bool = False) -> float:
    """F1a, F1h or F1p of ``cand`` against the ground truth ``gt``.

    Examples
    --------
    >>> gt = [[1, 2, 3], [2, 3, 4], [3, 4, 1], [4, 1, 2]]
    >>> cand = [[1, 2], [2, 3], [3, 4], [4, 1]]
    >>> round(mean_f1(gt, cand, "f1a"), 6)
    0.8
    """
    variant = MatchVariant(variant)
    fg, fc = f1_sides(gt, cand, variant is MatchVariant.F1P, mode, weighted)
    if variant is MatchVariant.F1A:
        return 0.5 * (fg + fc)
    return _harmonic(fg, fc)
