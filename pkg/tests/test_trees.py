"""Tests for spextree.trees."""

import pytest
from hypothesis import given

from spextree.errors import BadLabel, DomainError, NotATree, ParseError
from spextree.trees import (
    LabeledTree,
    bipartition,
    family_feasible,
    is_path,
    is_star,
    make_tree,
    parse_tree,
    profile,
    random_tree,
    relabel,
    to_edge_list,
)

from .strategies import PROPERTY_SETTINGS, trees_with_permutation


# ---------------------------------------------------------------------------
# parse_tree
# ---------------------------------------------------------------------------

def test_parse_tree_basic():
    tree = parse_tree("0 1\n1 2\n")
    assert tree.vertex_count == 3
    assert tree.edges == frozenset({(0, 1), (1, 2)})


def test_parse_tree_ignores_comments_and_blank_lines():
    tree = parse_tree("# a path\n\n1 0\n  \n2 1\n")
    assert tree.edges == frozenset({(0, 1), (1, 2)})


def test_parse_tree_single_vertex_header():
    tree = parse_tree("# tree n=1\n")
    assert tree.vertex_count == 1
    assert tree.edges == frozenset()


def test_parse_tree_empty_input():
    with pytest.raises(ParseError):
        parse_tree("")


def test_parse_tree_three_tokens():
    with pytest.raises(ParseError):
        parse_tree("0 1\n1 2 3\n")


def test_parse_tree_non_integer():
    with pytest.raises(ParseError):
        parse_tree("0 a\n")


def test_parse_tree_negative_label():
    with pytest.raises(BadLabel):
        parse_tree("-1 0\n")


def test_parse_tree_sparse_labels():
    with pytest.raises(BadLabel):
        parse_tree("0 2\n")


def test_parse_tree_header_mismatch():
    with pytest.raises(BadLabel):
        parse_tree("# tree n=5\n0 1\n")


def test_parse_tree_disconnected():
    with pytest.raises(NotATree):
        parse_tree("0 1\n2 3\n")


def test_parse_tree_cycle():
    with pytest.raises(NotATree):
        parse_tree("0 1\n1 2\n2 0\n")


def test_parse_tree_duplicate_edge():
    with pytest.raises(NotATree):
        parse_tree("0 1\n1 0\n")


def test_parse_tree_self_loop():
    with pytest.raises(NotATree):
        parse_tree("0 0\n0 1\n")


def test_edge_list_header_and_order(p4):
    assert to_edge_list(p4) == "# tree n=4\n0 1\n1 2\n2 3\n"


def test_edge_list_parses_back(spider):
    assert parse_tree(to_edge_list(spider)) == spider


def test_single_vertex_edge_list_parses_back():
    single = LabeledTree(1, frozenset())
    assert parse_tree(to_edge_list(single)) == single


# ---------------------------------------------------------------------------
# LabeledTree
# ---------------------------------------------------------------------------

def test_make_tree_out_of_range_label():
    with pytest.raises(BadLabel):
        make_tree([(0, 1), (1, 5)], 3)


def test_neighbors_and_degree(spider):
    assert spider.neighbors(0) == (1, 3, 5)
    assert spider.degree(0) == 3
    assert spider.degree(2) == 1


def test_path_between_vertices(spider):
    assert spider.path(2, 6) == [2, 1, 0, 5, 6]


def test_relabel_rejects_non_permutation(p4):
    with pytest.raises(BadLabel):
        relabel(p4, {0: 0, 1: 0, 2: 2, 3: 3})


def test_is_path_and_is_star(p4, k14, spider):
    assert is_path(p4) and not is_star(p4)
    assert is_star(k14) and not is_path(k14)
    assert not is_path(spider) and not is_star(spider)


def test_random_tree_is_deterministic():
    assert random_tree(10, seed=3) == random_tree(10, seed=3)
    assert random_tree(10, seed=3).vertex_count == 10


def test_random_tree_small_sizes():
    assert random_tree(1).vertex_count == 1
    assert random_tree(2).edges == frozenset({(0, 1)})
    with pytest.raises(DomainError):
        random_tree(0)


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------

def test_profile_path7(p7):
    P = profile(p7)
    assert P.A == frozenset({1, 3, 5})
    assert (P.m, P.l, P.delta, P.t) == (7, 2, 2, 0)
    assert P.in_small_excess_family


def test_profile_tie_takes_class_of_vertex_zero(p4):
    P = profile(p4)
    assert P.A == frozenset({0, 2})
    assert (P.l, P.delta, P.t) == (1, 1, 1)
    assert P.excess == {0: 0, 2: 1}


def test_profile_star(k14):
    P = profile(k14)
    assert P.A == frozenset({0})
    assert (P.l, P.delta, P.t) == (0, 4, 0)


def test_profile_single_vertex():
    with pytest.raises(DomainError):
        profile(LabeledTree(1, frozenset()))


def test_profile_report_keys(p7):
    report = profile(p7).as_report()
    assert report["A"] == [1, 3, 5]
    assert report["excess"] == {"1": 0, "3": 0, "5": 0}
    assert report["t_lt_l"] is True
    assert report["feasible"] is True


def test_bipartition_first_class_holds_zero(p4):
    even, odd = bipartition(p4)
    assert 0 in even
    assert odd == frozenset({1, 3})


def test_family_feasible():
    assert family_feasible(7, 2, 2)
    assert family_feasible(5, 0, 4)
    assert not family_feasible(6, 0, 4)
    assert not family_feasible(5, 2, 1)
    assert family_feasible(6, 2, 1)
    assert not family_feasible(6, 2, 2)
    assert not family_feasible(5, 1, 0)


@PROPERTY_SETTINGS
@given(trees_with_permutation(min_m=2))
def test_profile_survives_relabelling(case):
    tree, perm = case
    before, after = profile(tree), profile(relabel(tree, perm))
    assert (after.m, after.l, after.delta, after.t) == (before.m, before.l, before.delta, before.t)
    if len(before.A) != len(before.B):
        assert after.A == frozenset(perm[v] for v in before.A)


@PROPERTY_SETTINGS
@given(trees_with_permutation(min_m=2))
def test_profile_counts_add_up(case):
    tree, _ = case
    P = profile(tree)
    assert len(P.A) + len(P.B) == P.m
    assert len(P.A) <= len(P.B)
    assert min(P.excess.values()) == 0
    assert P.t == sum(P.excess.values())
    assert family_feasible(P.m, P.l, P.delta)
