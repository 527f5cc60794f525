"""Tests for spextree.embedder."""

import networkx as nx
import pytest
from hypothesis import given

from spextree.decomposition import decompose
from spextree.embedder import (
    EmbeddingSearch,
    certify_nonembeddable,
    embed_highdeg_join,
    embed_star_host,
    find_embedding_exact,
    join_host,
    star_host,
    verify_embedding,
)
from spextree.errors import BudgetExceeded, ConditionsNotMet, InvalidCertificate, PreconditionFailed
from spextree.graphs import graph_from_edges
from spextree.trees import profile
from spextree.witness import find_witness

from .strategies import PROPERTY_SETTINGS, small_excess_trees


def _embed(tree):
    P = profile(tree)
    D = decompose(tree, P)
    return embed_star_host(tree, P, D, find_witness(tree, P, D))


# ---------------------------------------------------------------------------
# Hosts
# ---------------------------------------------------------------------------

def test_star_host_layout():
    host = star_host(2, 7, 2)
    assert host.n == 16
    assert host.part1_vertices == [0, 1]
    assert host.star_center(0) == 2
    assert host.star_leaves(0) == [3]
    assert host.star_center(1) == 4
    # 2 * 14 join edges plus one edge per star
    assert host.graph.number_of_edges() == 35


def test_join_host_relabels_parts():
    host = join_host(nx.path_graph([10, 11]), nx.empty_graph(3))
    assert host.part1_vertices == [0, 1]
    assert host.part2_vertices == [2, 3, 4]
    assert host.graph.has_edge(0, 1)
    assert host.graph.number_of_edges() == 1 + 6


def test_verify_embedding_rejects_bad_maps(p4):
    host = nx.path_graph(5)
    assert verify_embedding(p4, host, {0: 0, 1: 1, 2: 2, 3: 3})
    assert not verify_embedding(p4, host, {0: 0, 1: 1, 2: 2})
    assert not verify_embedding(p4, host, {0: 0, 1: 1, 2: 0, 3: 1})
    assert not verify_embedding(p4, host, {0: 0, 1: 2, 2: 3, 3: 4})
    assert not verify_embedding(p4, host, {0: 0, 1: 1, 2: 2, 3: 9})


# ---------------------------------------------------------------------------
# embed_star_host
# ---------------------------------------------------------------------------

def test_embed_path7_singleton_witness(p7):
    emb = _embed(p7)
    assert emb.method == "constructive_star"
    assert emb.verified
    assert emb.witness == (3,)
    assert emb.mapping == {0: 5, 1: 4, 2: 0, 3: 2, 4: 3, 5: 1, 6: 6}


def test_embed_spider_multi_witness(spider):
    emb = _embed(spider)
    assert emb.method == "constructive_star"
    assert emb.witness == (1, 3, 5)
    assert emb.mapping == {0: 0, 1: 2, 2: 3, 3: 4, 4: 5, 5: 6, 6: 7}
    assert verify_embedding(spider, star_host(2, 7, 2), emb.mapping)


def test_embed_chain(chain):
    emb = _embed(chain)
    assert emb.verified
    assert emb.witness == (0,)


def test_embed_report(p7):
    report = _embed(p7).as_report()
    assert report["method"] == "constructive_star"
    assert report["verified"] is True
    assert report["map"]["3"] == 2
    assert report["witness"] == [3]


def test_embed_star_host_rejects_l_zero(k14):
    with pytest.raises(InvalidCertificate) as exc:
        _embed(k14)
    assert "K_1,4" in exc.value.extra["reason"]


def test_embed_star_host_rejects_delta_one(p6):
    with pytest.raises(InvalidCertificate):
        _embed(p6)


def test_embed_star_host_rejects_missing_witness(double_star):
    P = profile(double_star)
    with pytest.raises(InvalidCertificate):
        embed_star_host(double_star, P, cert=find_witness(double_star, P))


def test_double_star_really_does_not_embed(double_star):
    search = find_embedding_exact(double_star, star_host(1, 9, 2))
    assert search.exhausted


# ---------------------------------------------------------------------------
# Degree threshold and the counting certificate
# ---------------------------------------------------------------------------

def test_embed_highdeg_join(p7):
    host = join_host(nx.complete_graph(2), nx.star_graph(5))
    emb = embed_highdeg_join(p7, profile(p7), host)
    assert emb.method == "constructive_threshold"
    assert emb.verified
    assert verify_embedding(p7, host, emb.mapping)


def test_embed_highdeg_join_needs_degree(p7):
    host = join_host(nx.complete_graph(2), nx.empty_graph(10))
    with pytest.raises(PreconditionFailed):
        embed_highdeg_join(p7, profile(p7), host)


def test_embed_highdeg_join_needs_part_one_size(p7):
    host = join_host(nx.complete_graph(3), nx.star_graph(5))
    with pytest.raises(PreconditionFailed):
        embed_highdeg_join(p7, profile(p7), host)


def test_certify_nonembeddable_split_graph(p7):
    host = join_host(nx.complete_graph(2), nx.empty_graph(18))
    cert = certify_nonembeddable(p7, profile(p7), host)
    assert cert.part2_max_degree == 0
    assert cert.vertices_at_delta_minus_one == 0
    assert [c["p"] for c in cert.cases] == [1, 2, 3]
    assert dict(cert.cases[0]) == {
        "p": 1,
        "neighbors_needed": 2,
        "absorbable_in_part2": 1,
        "forced_into_part1": 1,
        "a_vertices_left": 2,
        "part1_room": 1,
    }
    assert cert.as_report()["embeddable"] is False
    assert find_embedding_exact(p7, host).exhausted


def test_certify_nonembeddable_too_many_top_degrees(p7):
    matching = graph_from_edges(6, [(0, 1), (2, 3), (4, 5)])
    host = join_host(nx.complete_graph(2), matching)
    with pytest.raises(ConditionsNotMet):
        certify_nonembeddable(p7, profile(p7), host)


def test_certify_nonembeddable_delta_one(p4):
    # P4 has delta = 1 and l = 1; the degree of part two never matters
    host = join_host(nx.complete_graph(1), nx.star_graph(4))
    with pytest.raises(ConditionsNotMet) as err:
        certify_nonembeddable(p4, profile(p4), host)
    assert "delta = 1" in err.value.message


def test_certify_nonembeddable_part_one_mismatch(p7):
    host = join_host(nx.complete_graph(3), nx.empty_graph(10))
    with pytest.raises(PreconditionFailed):
        certify_nonembeddable(p7, profile(p7), host)


# ---------------------------------------------------------------------------
# find_embedding_exact
# ---------------------------------------------------------------------------

def test_exact_search_finds_spider_in_complete_bipartite(spider):
    host = nx.complete_bipartite_graph(3, 10)
    search = find_embedding_exact(spider, host)
    assert search.found
    assert verify_embedding(spider, host, search.mapping)
    assert search.as_embedding().method == "backtracking"


def test_exact_search_pattern_larger_than_host(p7):
    search = find_embedding_exact(p7, nx.path_graph(6))
    assert search == EmbeddingSearch(None, 0)


def test_exact_search_budget(p7):
    with pytest.raises(BudgetExceeded) as exc:
        find_embedding_exact(p7, star_host(2, 7, 2), budget=1)
    assert exc.value.extra["expansions"] == 2


def test_exact_search_disconnected_pattern():
    two_edges = graph_from_edges(4, [(0, 1), (2, 3)])
    assert find_embedding_exact(two_edges, nx.path_graph(4)).found
    assert not find_embedding_exact(two_edges, nx.path_graph(3)).found


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------

@PROPERTY_SETTINGS
@given(small_excess_trees())
def test_small_excess_trees_embed_into_star_host(tree):
    P = profile(tree)
    emb = _embed(tree)
    assert emb.verified
    assert verify_embedding(tree, star_host(P.l, P.m, P.delta), emb.mapping)

