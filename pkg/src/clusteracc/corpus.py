"""Bundled reference clusterings.

``tableI`` holds a four-node ground truth made of every 3-node subset with a
low and a high quality candidate. ``constraints/<name>`` holds small
ground-truth / low / high triples, one per formal constraint
(homogeneity, completeness, ragbag, szquality). Node ids in the constraint
samples are arbitrary; only the cluster structure matters.
"""
from __future__ import annotations

from importlib import resources

from .model import Clustering, parse_cnl

__all__ = ["CONSTRAINTS", "corpus_path", "load_corpus", "load_sample"]

CONSTRAINTS = ("homogeneity", "completeness", "ragbag", "szquality")
ROLES = ("gt", "low", "high")


def corpus_path(sample: str, role: str):
    """Traversable for ``corpus/<sample>/<role>.cnl``.

    ``sample`` is ``"tableI"`` or one of :data:`CONSTRAINTS`.
    """
    if role not in ROLES:
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    root = resources.files(__package__) / "corpus"
    if sample == "tableI":
        return root / "tableI" / f"{role}.cnl"
    if sample in CONSTRAINTS:
        return root / "constraints" / sample / f"{role}.cnl"
    raise ValueError(f"unknown sample {sample!r}")


def load_corpus(sample: str, role: str) -> Clustering:
    return parse_cnl(corpus_path(sample, role).read_text(encoding="utf-8"))


def load_sample(sample: str) -> dict[str, Clustering]:
    """All three clusterings of a sample keyed by role."""
    return {r: load_corpus(sample, r) for r in ROLES}
