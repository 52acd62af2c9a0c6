"""Clusterings, node indices and contribution semantics.

A clustering is an ordered collection of clusters over integer node ids.
Nodes may belong to several clusters; how a shared node is counted depends
on the :class:`ContributionMode`:

* ``MULTIRESOLUTION`` - the node fully belongs to each containing cluster
  (nested clusters taken at several granularities), contribution 1.
* ``OVERLAPPING`` - the node splits its membership evenly among the
  ``shares`` clusters containing it, contribution ``1 / shares``.
"""
from __future__ import annotations

import enum
import io
import os
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .exceptions import (
    EmptyClusteringError,
    ParseError,
    UniverseMismatchError,
)

__all__ = [
    "Cluster",
    "Clustering",
    "ContributionMode",
    "Contributions",
    "MetricResult",
    "NodeIndex",
    "UniversePolicy",
    "align_universes",
    "build_node_index",
    "check_clustering",
    "check_clustering_pair",
    "compute_contributions",
    "dump_cnl",
    "load_cnl",
    "parse_cnl",
    "save_cnl",
]


class ContributionMode(str, enum.Enum):
    OVERLAPPING = "overlapping"
    MULTIRESOLUTION = "multiresolution"

    @classmethod
    def coerce(cls, value) -> "ContributionMode":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        aliases = {"ovp": cls.OVERLAPPING, "overlapping": cls.OVERLAPPING,
                   "multires": cls.MULTIRESOLUTION,
                   "multiresolution": cls.MULTIRESOLUTION}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown contribution mode: {value!r}") from None


class UniversePolicy(str, enum.Enum):
    STRICT = "strict"
    INTERSECT = "intersect"


@dataclass(frozen=True)
class Cluster:
    """One cluster: its ordinal within the clustering and its members.

    Members keep their input order so that serialization mirrors the input.
    """

    id: int
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, node) -> bool:
        return node in self.member_set

    @property
    def member_set(self) -> frozenset[int]:
        # Cached lazily; frozen dataclass so go through object.__setattr__.
        try:
            return self.__dict__["_member_set"]
        except KeyError:
            s = frozenset(self.members)
            object.__setattr__(self, "_member_set", s)
            return s


class Clustering:
    """Ordered collection of non-empty clusters.

    Parameters
    ----------
    clusters : iterable of iterables of int
        Member node ids of each cluster, in order. Node ids must be
        non-negative integers and unique within a cluster. Identical
        clusters are kept as separate entries.
    """

    __slots__ = ("clusters", "node_universe", "_arrays")

    def __init__(self, clusters: Iterable[Iterable[int]]):
        built = []
        for i, members in enumerate(clusters):
            if isinstance(members, Cluster):
                members = members.members
            members = tuple(_as_node_id(x) for x in members)
            if not members:
                raise ValueError(f"cluster {i} is empty")
            if len(set(members)) != len(members):
                raise ValueError(f"cluster {i} has duplicate members")
            built.append(Cluster(i, members))
        self.clusters: tuple[Cluster, ...] = tuple(built)
        self.node_universe: frozenset[int] = frozenset(
            n for c in self.clusters for n in c.members)
        self._arrays = None

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Clustering":
        """Build a partition from a label vector (node ``i`` gets ``labels[i]``).

        Clusters are ordered by sorted label value.
        """
        labels = np.asarray(labels)
        if labels.ndim != 1:
            raise ValueError(f"labels must be 1D, got shape {labels.shape}")
        if labels.size == 0:
            raise EmptyClusteringError()
        uniq, inverse = np.unique(labels, return_inverse=True)
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(len(uniq) + 1))
        return cls(order[bounds[k]:bounds[k + 1]].tolist()
                   for k in range(len(uniq)))

    def __len__(self) -> int:
        return len(self.clusters)

    def __iter__(self) -> Iterator[Cluster]:
        return iter(self.clusters)

    def __getitem__(self, i) -> Cluster:
        return self.clusters[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return ([c.members for c in self.clusters]
                == [c.members for c in other.clusters])

    def __hash__(self):
        return hash(tuple(c.members for c in self.clusters))

    def __repr__(self) -> str:
        return (f"Clustering({len(self.clusters)} clusters, "
                f"{len(self.node_universe)} nodes)")

    @property
    def n_nodes(self) -> int:
        return len(self.node_universe)

    @property
    def sizes(self) -> np.ndarray:
        return np.fromiter((len(c) for c in self.clusters), dtype=np.int64,
                           count=len(self.clusters))

    @property
    def total_membership(self) -> int:
        return sum(len(c) for c in self.clusters)

    def is_partition(self) -> bool:
        return self.total_membership == self.n_nodes

    def nodes(self) -> np.ndarray:
        """Sorted node ids; position in this array is the dense node id."""
        return self._flat()[0]

    def _flat(self):
        if self._arrays is None:
            nodes = np.array(sorted(self.node_universe), dtype=np.int64)
            members = np.fromiter(
                (n for c in self.clusters for n in c.members),
                dtype=np.int64, count=self.total_membership)
            owners = np.repeat(np.arange(len(self.clusters)), self.sizes)
            self._arrays = (nodes, members, owners)
        return self._arrays

    def membership_matrix(self, nodes: np.ndarray | None = None) -> sp.csr_matrix:
        """Sparse node-by-cluster 0/1 matrix with rows in ``nodes`` order.

        ``nodes`` defaults to this clustering's sorted universe and must be
        sorted and contain every member.
        """
        own_nodes, members, owners = self._flat()
        if nodes is None:
            nodes = own_nodes
        rows = np.searchsorted(nodes, members)
        if len(members) and (rows.max() >= len(nodes)
                             or not np.array_equal(nodes[rows], members)):
            raise ValueError("node order does not cover the clustering")
        data = np.ones(len(members), dtype=np.int64)
        return sp.csr_matrix((data, (rows, owners)),
                             shape=(len(nodes), len(self.clusters)))

    def restrict(self, keep) -> "Clustering":
        """Members outside ``keep`` removed; emptied clusters dropped."""
        keep = frozenset(keep)
        return Clustering(
            kept for kept in ([n for n in c.members if n in keep]
                              for c in self.clusters) if kept)


def _as_node_id(x) -> int:
    try:
        v = int(x)
    except (TypeError, ValueError):
        raise ValueError(f"node id must be an integer, got {x!r}") from None
    if v != x or v < 0:
        raise ValueError(f"node id must be a non-negative integer, got {x!r}")
    return v


@dataclass(frozen=True)
class NodeIndex:
    """Association map node -> ids of the clusters containing it."""

    relations: dict[int, tuple[int, ...]]
    n_clusters: int

    def shares(self, node: int) -> int:
        return len(self.relations.get(node, ()))

    def __len__(self) -> int:
        return len(self.relations)

    def __contains__(self, node) -> bool:
        return node in self.relations

    def __getitem__(self, node) -> tuple[int, ...]:
        return self.relations[node]

    @property
    def total_relations(self) -> int:
        return sum(len(v) for v in self.relations.values())

    def nodes(self) -> np.ndarray:
        return np.array(sorted(self.relations), dtype=np.int64)

    def membership_matrix(self, nodes: np.ndarray | None = None) -> sp.csr_matrix:
        if nodes is None:
            nodes = self.nodes()
        indptr = np.zeros(len(nodes) + 1, dtype=np.int64)
        cols = []
        for i, n in enumerate(nodes.tolist()):
            rel = self.relations.get(n, ())
            cols.extend(rel)
            indptr[i + 1] = indptr[i] + len(rel)
        cols = np.asarray(cols, dtype=np.int64)
        return sp.csr_matrix((np.ones(len(cols), dtype=np.int64), cols, indptr),
                             shape=(len(nodes), self.n_clusters))


def build_node_index(c: Clustering) -> NodeIndex:
    rels: dict[int, list[int]] = {}
    for cl in c.clusters:
        cid = cl.id
        for n in cl.members:
            lst = rels.get(n)
            if lst is None:
                rels[n] = [cid]
            else:
                lst.append(cid)
    return NodeIndex({n: tuple(v) for n, v in rels.items()}, len(c.clusters))


@dataclass(frozen=True)
class Contributions:
    """Per-cluster weights and per-node matched contributions.

    ``weights[i]`` is the total contribution (``|x|``) of cluster ``i``.
    ``node_share`` maps a node to the mass it adds to a matched pair of
    clusters; ``None`` means every node adds 1.
    """

    mode: ContributionMode
    weights: np.ndarray
    node_share: dict[int, float] | None = None

    def share(self, node: int) -> float:
        if self.node_share is None:
            return 1.0
        return self.node_share[node]


def compute_contributions(c: Clustering, own: NodeIndex, other: NodeIndex,
                          mode=ContributionMode.MULTIRESOLUTION) -> Contributions:
    """Weights of ``c``'s clusters and node contributions under ``mode``.

    In overlapping mode a cluster weighs the sum of ``1 / shares`` of its
    members (shares counted in ``c`` itself), while a node matched between
    the two clusterings contributes ``1 / max(shares in c, shares in other)``.
    """
    mode = ContributionMode.coerce(mode)
    if mode is ContributionMode.MULTIRESOLUTION:
        return Contributions(mode, c.sizes.astype(np.float64))
    rel = own.relations
    weights = np.empty(len(c.clusters), dtype=np.float64)
    for cl in c.clusters:
        w = 0.0
        for n in cl.members:
            w += 1.0 / len(rel[n])
        weights[cl.id] = w
    orel = other.relations
    node_share = {n: 1.0 / max(len(v), len(orel.get(n, ())))
                  for n, v in rel.items()}
    return Contributions(mode, weights, node_share)


def align_universes(a: Clustering, b: Clustering,
                    policy=UniversePolicy.STRICT) -> tuple[Clustering, Clustering]:
    """Make two clusterings cover the same nodes.

    ``strict`` raises :class:`UniverseMismatchError` unless the universes are
    identical. ``intersect`` restricts both clusterings to the shared nodes,
    dropping clusters that become empty, and warns with the removed count.
    """
    policy = UniversePolicy(policy)
    if a.node_universe == b.node_universe:
        return a, b
    only_a = a.node_universe - b.node_universe
    only_b = b.node_universe - a.node_universe
    if policy is UniversePolicy.STRICT:
        raise UniverseMismatchError(len(only_a), len(only_b))
    shared = a.node_universe & b.node_universe
    if not shared:
        raise EmptyClusteringError("clusterings share no nodes")
    warnings.warn(f"removed {len(only_a) + len(only_b)} node(s) outside the "
                  f"shared universe ({len(only_a)} + {len(only_b)})",
                  stacklevel=2)
    return a.restrict(shared), b.restrict(shared)


# --- clusters-per-line (CNL) files -------------------------------------------

def parse_cnl(text) -> Clustering:
    """Parse clusters-per-line text (a string or an iterable of lines).

    One cluster per line, members separated by spaces or tabs. Blank lines
    and lines starting with ``#`` are skipped.
    """
    if isinstance(text, str):
        text = io.StringIO(text)
    clusters = []
    for lineno, line in enumerate(text, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        members = []
        for tok in s.split():
            if not tok.isdigit() or not tok.isascii():
                raise ParseError(f"invalid node id {tok!r}", lineno)
            members.append(int(tok))
        if len(set(members)) != len(members):
            raise ParseError("duplicate node id within a cluster", lineno)
        clusters.append(members)
    if not clusters:
        raise EmptyClusteringError()
    return Clustering(clusters)


def dump_cnl(c: Clustering) -> str:
    return "".join(" ".join(map(str, cl.members)) + "\n" for cl in c.clusters)


def load_cnl(path) -> Clustering:
    with open(path, encoding="utf-8") as f:
        return parse_cnl(f)


def save_cnl(c: Clustering, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dump_cnl(c))


# --- input validation --------------------------------------------------------

def check_clustering(obj) -> Clustering:
    """Coerce ``obj`` to a :class:`Clustering`.

    Accepts a Clustering, a path to a CNL file, or a sequence of clusters
    given as iterables of node ids.
    """
    if isinstance(obj, Clustering):
        return obj
    if isinstance(obj, (str, os.PathLike)):
        return load_cnl(obj)
    if isinstance(obj, np.ndarray) and obj.ndim == 1:
        raise TypeError("got a 1D array; use Clustering.from_labels() for "
                        "label vectors")
    try:
        c = Clustering(obj)
    except TypeError:
        raise TypeError(f"cannot interpret {type(obj).__name__} as a "
                        "clustering") from None
    if not len(c):
        raise EmptyClusteringError()
    return c


def check_clustering_pair(gt, cand, policy=UniversePolicy.STRICT):
    """Validate and align a ground-truth / candidate pair."""
    return align_universes(check_clustering(gt), check_clustering(cand), policy)


@dataclass
class MetricResult:
    """A metric value with run metadata, as reported by the CLI."""

    name: str
    value: float
    converged: bool = True
    events: int | None = None
    seed: int | None = None
    elapsed_ms: float = 0.0
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {"value": self.value, "converged": self.converged,
             "events": self.events, "seed": self.seed,
             "elapsed_ms": self.elapsed_ms}
        d.update(self.extra)
        return d
