"""Entropy, exact NMI and the stochastic GNMI estimator.

Mutual information is taken over the joint distribution of
(category, cluster) pairs, where each node adds one unit of mass to every
pair of clusters containing it. Masses are normalized by the total joint
mass, which equals the node count for non-overlapping clusterings.

GNMI estimates the same quantity by sampling: every event draws a random
node, resolves one (category, cluster) pair for it and then walks through
nodes of the same category or cluster while the walk keeps discovering new
pairs. Sampling continues until the confidence half-width of the running
estimate drops below the admissible error, or the hard event budget runs
out.
"""
from __future__ import annotations

import enum
import math
import random
import statistics
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateInputError
from .model import (
    Clustering,
    NodeIndex,
    build_node_index,
    check_clustering,
    check_clustering_pair,
)

__all__ = ["GnmiConfig", "GnmiResult", "JointOverlapTable", "Mixer",
           "Normalization", "entropy", "gnmi", "joint_overlap_table",
           "max_events", "nmi_exact", "try_get_sample"]


class Normalization(str, enum.Enum):
    MAX = "max"
    AVG = "avg"
    GEO = "geo"


def _entropy_bits(mass: np.ndarray) -> float:
    mass = np.asarray(mass, dtype=np.float64)
    p = mass[mass > 0] / mass.sum()
    return float(-(p * np.log2(p)).sum()) + 0.0


def entropy(c) -> float:
    """Entropy in bits of the cluster-size distribution of ``c``."""
    c = check_clustering(c)
    return _entropy_bits(c.sizes)


@dataclass(frozen=True)
class JointOverlapTable:
    """Sparse (category, cluster) overlap masses with their marginals."""

    entries: dict[tuple[int, int], float]
    gt_marginals: np.ndarray
    cand_marginals: np.ndarray
    total_mass: float

    def mutual_information(self) -> float:
        return _mutual_information(self.entries, self.gt_marginals,
                                   self.cand_marginals, self.total_mass)


def joint_overlap_table(gt, cand) -> JointOverlapTable:
    """Overlap masses of every intersecting (category, cluster) pair.

    Each node adds 1 to each pair of clusters containing it, so the cost
    is the sum over nodes of ``shares_gt * shares_cand``.
    """
    gt, cand = check_clustering_pair(gt, cand)
    gi, ci = build_node_index(gt), build_node_index(cand)
    nodes = gi.nodes()
    # (n x K')^T @ (n x K) adds every node's (category, cluster) pairs at once.
    joint = (gi.membership_matrix(nodes).T @ ci.membership_matrix(nodes)).tocoo()
    entries = {(int(g), int(c)): float(v)
               for g, c, v in zip(joint.row, joint.col, joint.data) if v}
    gm = np.zeros(len(gt), dtype=np.float64)
    cm = np.zeros(len(cand), dtype=np.float64)
    for (g, c), v in entries.items():
        gm[g] += v
        cm[c] += v
    return JointOverlapTable(entries, gm, cm, float(gm.sum()))


def _mutual_information(entries, gm, cm, total) -> float:
    if not entries:
        return 0.0
    keys = np.array(list(entries.keys()), dtype=np.int64)
    v = np.fromiter(entries.values(), dtype=np.float64, count=len(entries))
    p = v / total
    ratio = v * total / (gm[keys[:, 0]] * cm[keys[:, 1]])
    return float((p * np.log2(ratio)).sum())


def _normalized(mi: float, hg: float, hc: float, norm: Normalization) -> float:
    if norm is Normalization.MAX:
        denom = max(hg, hc)
    elif norm is Normalization.AVG:
        denom = 0.5 * (hg + hc)
    else:
        denom = math.sqrt(hg * hc)
    if denom <= 0:
        raise DegenerateInputError("degenerate clustering (single cluster)")
    value = mi / denom
    # Round-off can push the ratio marginally outside [0, 1].
    if -1e-9 <= value < 0:
        value = 0.0
    elif 1 < value <= 1 + 1e-9:
        value = 1.0
    return value


def _nmi_of(entries, gm, cm, norm) -> float:
    total = float(gm.sum())
    mi = _mutual_information(entries, gm, cm, total)
    return _normalized(mi, _entropy_bits(gm), _entropy_bits(cm), norm)


def nmi_exact(gt, cand, norm=Normalization.MAX) -> float:
    """NMI from the full joint overlap table.

    ``norm`` selects the normalizer: max (default), arithmetic mean (avg) or
    geometric mean (geo) of the two entropies. Entropies are those of the
    joint table's marginals, which for non-overlapping clusterings are the
    cluster-size distributions.

    Raises
    ------
    DegenerateInputError
        If the normalizing entropy is zero.
    """
    norm = Normalization(norm)
    t = joint_overlap_table(gt, cand)
    return _nmi_of(t.entries, t.gt_marginals, t.cand_marginals, norm)


# --- GNMI --------------------------------------------------------------------

@dataclass(frozen=True)
class GnmiConfig:
    """Sampling parameters.

    rerr : admissible error of the estimate.
    rrisk : risk, i.e. one minus the confidence of the error bound.
    seed : base seed; worker ``w`` samples with ``seed + w``.
    max_wall_events : hard budget as a multiple of :func:`max_events`.
    batch_size : events per batch; convergence is judged on batch estimates.
    """

    rerr: float = 0.01
    rrisk: float = 0.01
    seed: int = 0
    max_wall_events: float = 100
    batch_size: int = 256

    def __post_init__(self):
        if not 0 < self.rerr < 1:
            raise ValueError(f"rerr must be in (0, 1), got {self.rerr}")
        if not 0 < self.rrisk < 1:
            raise ValueError(f"rrisk must be in (0, 1), got {self.rrisk}")
        if self.max_wall_events < 1:
            raise ValueError("max_wall_events must be at least 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")


@dataclass(frozen=True)
class GnmiResult:
    value: float
    converged: bool
    events: int
    evsmax: int
    half_width: float
    importance: float
    seed: int
    workers: int
    diagnostic: str | None = None

    def __float__(self) -> float:
        return self.value


def max_events(gt, cand, cfg: GnmiConfig = GnmiConfig()) -> int:
    """Minimal number of sampling events before convergence is tested."""
    mbs_gt = check_clustering(gt).total_membership
    mbs_cand = check_clustering(cand).total_membership
    bound = max(min(mbs_gt, mbs_cand), 1.0 / (cfg.rerr * math.sqrt(cfg.rrisk)))
    # Round first so that e.g. 1 / (0.01 * 0.1) does not become 1001.
    return math.ceil(round(bound, 9))


class Mixer:
    """Sampling state of one worker.

    Resolves a node to one (category, cluster) pair and records the pairs a
    walk has touched. ``apply`` counts a pair and reports whether it is new
    to the current walk, which is the walk's continuation condition.
    """

    def __init__(self, gt: Clustering, cand: Clustering,
                 gt_index: NodeIndex, cand_index: NodeIndex):
        self.gt_members = [c.members for c in gt.clusters]
        self.cand_members = [c.members for c in cand.clusters]
        self._grel = gt_index.relations
        self._crel = cand_index.relations
        self.counts: Counter = Counter()
        self.matched: tuple[int, int] | None = None

    def reset(self) -> None:
        self.counts.clear()
        self.matched = None

    def cls_pair(self, node: int, rng: random.Random) -> tuple[int, int]:
        # A node in several clusters resolves to one of them uniformly.
        g = self._grel[node]
        c = self._crel[node]
        return (g[0] if len(g) == 1 else g[rng.randrange(len(g))],
                c[0] if len(c) == 1 else c[rng.randrange(len(c))])

    def apply(self, g: int, c: int) -> bool:
        if self.matched is None:
            self.matched = (g, c)
        key = (g, c)
        new = key not in self.counts
        self.counts[key] += 1
        return new


def _weight(mixer: Mixer, g: int, c: int) -> float:
    return 1.0 / max(math.sqrt(len(mixer.gt_members[g])
                               * len(mixer.cand_members[c])), 1.0)


def try_get_sample(nodes, rrisk: float, mixer: Mixer, rng: random.Random) -> float:
    """Run one sampling walk and return its mean importance.

    The walk starts at a uniformly drawn node and repeatedly jumps to a
    random member of the current category or cluster (chosen with equal
    probability) while the mixer reports new pairs, for at most
    ``(|g| + |c|) / (2 * rrisk)`` steps. Each visited pair weighs
    ``1 / max(sqrt(|g| * |c|), 1)``.
    """
    mixer.reset()
    node = nodes[rng.randrange(len(nodes))]
    g, c = mixer.cls_pair(node, rng)
    attempts = (len(mixer.gt_members[g]) + len(mixer.cand_members[c])) / (2 * rrisk)
    importance = _weight(mixer, g, c)
    adone = 1
    while mixer.apply(g, c):
        adone += 1
        if adone > attempts:
            break
        cm = mixer.gt_members[g] if rng.random() < 0.5 else mixer.cand_members[c]
        ndm = cm[rng.randrange(len(cm))]
        g, c = mixer.cls_pair(ndm, rng)
        importance += _weight(mixer, g, c)
    return importance / adone


def _run_batch(nodes, rrisk, mixer, rng, size):
    pairs = Counter()
    importance = 0.0
    for _ in range(size):
        importance += try_get_sample(nodes, rrisk, mixer, rng)
        pairs[mixer.matched] += 1
    return pairs, importance


def _table_nmi(pairs: Counter, n_gt: int, n_cand: int,
               norm) -> tuple[float, float] | None:
    """Miller-Madow corrected NMI of sampled pair counts.

    Each entropy ``H`` over ``K`` observed outcomes from ``n`` samples is
    raised by ``(K - 1) / (2 n ln 2)``; the joint entropy likewise, so
    identical clusterings still estimate exactly 1. Returns the value and
    the size of the applied MI correction relative to the normalizer, or
    None when the sampled marginals are degenerate.
    """
    gm = np.zeros(n_gt)
    cm = np.zeros(n_cand)
    for (g, c), v in pairs.items():
        gm[g] += v
        cm[c] += v
    n = gm.sum()
    k_gt = int((gm > 0).sum())
    k_cand = int((cm > 0).sum())
    scale = 2.0 * n * math.log(2)
    hg = _entropy_bits(gm) + (k_gt - 1) / scale
    hc = _entropy_bits(cm) + (k_cand - 1) / scale
    correction = (k_gt + k_cand - len(pairs) - 1) / scale
    mi = _mutual_information(pairs, gm, cm, n) + correction
    try:
        value = _normalized(mi, hg, hc, norm)
        rel = _normalized(abs(correction), hg, hc, norm)
    except DegenerateInputError:
        return None
    return min(max(value, 0.0), 1.0), rel


def gnmi(gt, cand, cfg: GnmiConfig = GnmiConfig(), workers: int = 1,
         norm=Normalization.MAX) -> GnmiResult:
    """Stochastic NMI estimate with confidence-based stopping.

    Events are drawn in batches of ``cfg.batch_size`` per worker. Once at
    least :func:`max_events` events are in, the run converges when
    ``z * stdev(batch estimates) / sqrt(batches) <= cfg.rerr`` with ``z``
    the normal quantile for confidence ``1 - cfg.rrisk``, and the small
    sample bias correction of the merged estimate is itself within
    ``cfg.rerr``. Exhausting
    ``cfg.max_wall_events * max_events`` events yields a result flagged
    as not converged instead of an exception.

    Each worker owns a generator seeded with ``cfg.seed + worker`` and its
    own tables; batches are merged in worker order, so a fixed
    ``(seed, workers)`` pair reproduces the same value.
    """
    norm = Normalization(norm)
    gt, cand = check_clustering_pair(gt, cand)
    if len(gt) == 1 and len(cand) == 1:
        raise DegenerateInputError("degenerate clustering (single cluster)")
    gi, ci = build_node_index(gt), build_node_index(cand)
    nodes = gt.nodes().tolist()
    evsmax = max_events(gt, cand, cfg)
    budget = math.ceil(cfg.max_wall_events * evsmax)
    z = statistics.NormalDist().inv_cdf(1 - cfg.rrisk / 2)
    workers = max(1, int(workers))
    rngs = [random.Random(cfg.seed + w) for w in range(workers)]
    mixers = [Mixer(gt, cand, gi, ci) for _ in range(workers)]

    joint = Counter()
    estimate = None
    batch_values: list[float] = []
    events = 0
    importance = 0.0
    half_width = math.inf
    converged = False
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while events < budget:
            size = min(cfg.batch_size, math.ceil((budget - events) / workers))
            args = [(nodes, cfg.rrisk, mixers[w], rngs[w], size)
                    for w in range(workers)]
            if pool is None:
                batches = [_run_batch(*a) for a in args]
            else:
                batches = list(pool.map(lambda a: _run_batch(*a), args))
            for pairs, imp in batches:
                joint.update(pairs)
                importance += imp
                events += sum(pairs.values())
                v = _table_nmi(pairs, len(gt), len(cand), norm)
                if v is not None:
                    batch_values.append(v[0])
            if events >= evsmax and len(batch_values) >= 2:
                half_width = (z * statistics.stdev(batch_values)
                              / math.sqrt(len(batch_values)))
                if half_width <= cfg.rerr:
                    estimate = _table_nmi(joint, len(gt), len(cand), norm)
                    if estimate is not None and estimate[1] <= cfg.rerr:
                        converged = True
                        break
    finally:
        if pool is not None:
            pool.shutdown()

    if not converged:
        estimate = _table_nmi(joint, len(gt), len(cand), norm)
    value = float(estimate[0]) if estimate is not None else None
    diagnostic = None
    if value is None:
        value = 0.0
        converged = False
        diagnostic = "sampled joint distribution is degenerate"
    elif not converged:
        if half_width > cfg.rerr:
            reason = f"half-width {half_width:.4g} > rerr {cfg.rerr}"
        else:
            reason = f"bias correction {estimate[1]:.4g} > rerr {cfg.rerr}"
        diagnostic = f"not converged after {events} events: {reason}"
    return GnmiResult(value, converged, events, evsmax, half_width,
                      importance / events if events else 0.0, cfg.seed,
                      workers, diagnostic)
