import numpy as np
import pytest
from hypothesis import given

from clusteracc import (
    Clustering,
    ContributionMode,
    EmptyClusteringError,
    ParseError,
    UniverseMismatchError,
    align_universes,
    build_node_index,
    compute_contributions,
    dump_cnl,
    load_cnl,
    parse_cnl,
    save_cnl,
)
from clusteracc.corpus import CONSTRAINTS, load_sample
from clusteracc.model import MetricResult, check_clustering

from conftest import clustering_pairs

TABLE_GT = [[1, 2, 3], [2, 3, 4], [3, 4, 1], [4, 1, 2]]
TABLE_HIGH = [[1, 2], [2, 3], [3, 4], [4, 1]]


def test_parse_basic():
    c = parse_cnl("1 2 3\n# comment\n\n4\t5\n")
    assert [cl.members for cl in c.clusters] == [(1, 2, 3), (4, 5)]
    assert c.node_universe == frozenset({1, 2, 3, 4, 5})


def test_parse_preserves_member_order():
    assert parse_cnl("3 1 2\n").clusters[0].members == (3, 1, 2)


@pytest.mark.parametrize("text, lineno", [
    ("1 2\n1 x\n", 2),
    ("1 2 2\n", 1),
    ("# c\n\n-1 2\n", 3),
    ("1 2.5\n", 1),
])
def test_parse_errors_carry_line(text, lineno):
    with pytest.raises(ParseError) as e:
        parse_cnl(text)
    assert e.value.lineno == lineno
    assert f"line {lineno}" in str(e.value)


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n"])
def test_parse_empty(text):
    with pytest.raises(EmptyClusteringError):
        parse_cnl(text)


def test_round_trip(tmp_path):
    c = Clustering(TABLE_GT)
    path = tmp_path / "c.cnl"
    save_cnl(c, path)
    assert load_cnl(path) == c
    assert dump_cnl(c) == "1 2 3\n2 3 4\n3 4 1\n4 1 2\n"


@given(clustering_pairs())
def test_round_trip_property(pair):
    a, _ = pair
    assert parse_cnl(dump_cnl(a)) == a


def test_clustering_validation():
    with pytest.raises(ValueError):
        Clustering([[1, 1]])
    with pytest.raises(ValueError):
        Clustering([[1, -2]])
    with pytest.raises(ValueError):
        Clustering([[1], []])
    with pytest.raises(EmptyClusteringError):
        check_clustering([])
    with pytest.raises(TypeError):
        check_clustering(np.array([0, 1, 1]))


def test_from_labels():
    c = Clustering.from_labels([0, 1, 0, 2])
    assert [cl.members for cl in c.clusters] == [(0, 2), (1,), (3,)]
    assert c.is_partition()


def test_clustering_stats():
    c = Clustering(TABLE_GT)
    assert c.n_nodes == 4
    assert c.total_membership == 12
    assert list(c.sizes) == [3, 3, 3, 3]
    assert not c.is_partition()


def test_node_index():
    idx = build_node_index(Clustering(TABLE_HIGH))
    assert idx.relations == {1: (0, 3), 2: (0, 1), 3: (1, 2), 4: (2, 3)}
    assert idx.shares(1) == 2 and idx.shares(99) == 0
    assert idx.total_relations == 8
    m = idx.membership_matrix()
    assert m.shape == (4, 4)
    assert m.sum() == 8


def test_membership_matrix_matches_index():
    c = Clustering(TABLE_GT)
    a = c.membership_matrix().toarray()
    b = build_node_index(c).membership_matrix(c.nodes()).toarray()
    np.testing.assert_array_equal(a, b)


def test_contributions_multires():
    gt, high = Clustering(TABLE_GT), Clustering(TABLE_HIGH)
    w = compute_contributions(gt, build_node_index(gt), build_node_index(high),
                              "multires")
    assert list(w.weights) == [3, 3, 3, 3]
    assert w.share(1) == 1.0


def test_contributions_overlapping():
    gt, high = Clustering(TABLE_GT), Clustering(TABLE_HIGH)
    gi, hi = build_node_index(gt), build_node_index(high)
    w = compute_contributions(gt, gi, hi, ContributionMode.OVERLAPPING)
    # Each node sits in 3 categories and 2 clusters.
    np.testing.assert_allclose(w.weights, [1.0] * 4)
    assert w.share(1) == pytest.approx(1 / 3)
    wh = compute_contributions(high, hi, gi, "ovp")
    np.testing.assert_allclose(wh.weights, [1.0] * 4)


def test_contributions_partition_modes_agree():
    c = Clustering([[0, 1, 2], [3, 4]])
    i = build_node_index(c)
    a = compute_contributions(c, i, i, "ovp")
    b = compute_contributions(c, i, i, "multires")
    np.testing.assert_array_equal(a.weights, b.weights)


def test_align_strict_and_intersect():
    a = Clustering([[1, 2, 3], [4]])
    b = Clustering([[1, 2], [3, 5]])
    with pytest.raises(UniverseMismatchError) as e:
        align_universes(a, b)
    assert "1 node(s) only in the first" in str(e.value)
    with pytest.warns(UserWarning, match="removed 2"):
        ra, rb = align_universes(a, b, "intersect")
    assert ra == Clustering([[1, 2, 3]])
    assert rb == Clustering([[1, 2], [3]])


def test_align_disjoint_intersect():
    with pytest.raises(EmptyClusteringError):
        align_universes(Clustering([[1]]), Clustering([[2]]), "intersect")


def test_metric_result_dict():
    d = MetricResult("nmi", 0.5, elapsed_ms=1.0).as_dict()
    assert d == {"value": 0.5, "converged": True, "events": None,
                 "seed": None, "elapsed_ms": 1.0}


@pytest.mark.parametrize("sample", ("tableI",) + CONSTRAINTS)
def test_corpus_universes_align(sample):
    s = load_sample(sample)
    assert s["gt"].node_universe == s["low"].node_universe == s["high"].node_universe
