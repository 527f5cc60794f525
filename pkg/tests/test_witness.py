"""Tests for spextree.witness."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spextree.constructors import canonical_member
from spextree.decomposition import decompose, induced_forest
from spextree.errors import EmptyWitness, InvalidWitness, NotSubsetOfJprime
from spextree.trees import profile
from spextree.witness import NoWitness, all_witnesses, check_with, claim_case, find_witness, refine

from .strategies import PROPERTY_SETTINGS, small_excess_trees, trees


def _setup(tree):
    P = profile(tree)
    return P, decompose(tree, P)


# ---------------------------------------------------------------------------
# check_with / find_witness
# ---------------------------------------------------------------------------

def test_find_witness_path7(p7):
    cert = find_witness(p7)
    assert cert.valid
    assert cert.witness == (3,)
    assert (cert.lhs, cert.rhs) == (2, 1)
    assert cert.per_vertex == ((3, 2, 0),)
    assert cert.bounded_ok is None


def test_find_witness_spider_needs_all_three(spider):
    cert = find_witness(spider)
    assert cert.valid
    assert cert.witness == (1, 3, 5)
    assert cert.bounded_ok is True
    assert cert.neighborhood_ok is True
    assert cert.tree_check is True


def test_find_witness_chain(chain):
    cert = find_witness(chain)
    assert cert.valid
    assert cert.witness == (0,)


def test_no_witness_path4(p4):
    cert = find_witness(p4)
    assert isinstance(cert, NoWitness)
    assert not cert.valid


def test_no_witness_star(k14):
    cert = find_witness(k14)
    assert isinstance(cert, NoWitness)
    assert cert.reason == "J' is empty"


def test_no_witness_double_star(double_star):
    assert not find_witness(double_star).valid


def test_check_with_empty_subset(p7):
    P, D = _setup(p7)
    with pytest.raises(EmptyWitness):
        check_with(p7, P, D, [])


def test_check_with_outside_jprime(p7):
    P, D = _setup(p7)
    with pytest.raises(NotSubsetOfJprime):
        check_with(p7, P, D, [1])


def test_check_with_reports_reasons(spider):
    P, D = _setup(spider)
    cert = check_with(spider, P, D, [1, 5])
    # 1 and 5 share the middle vertex 0, which also reaches 3
    assert cert.tree_check
    assert cert.neighborhood_ok is False
    assert not cert.valid
    assert "outside I" in cert.reason


def test_certificate_report(p7):
    report = find_witness(p7).as_report()
    assert report["witness"] == [3]
    assert report["valid"] is True
    assert report["per_vertex"] == [{"v": 3, "a": 2, "t": 0}]
    assert report["refined"] is None


def test_all_witnesses_on_spider(spider):
    P, D = _setup(spider)
    assert [c.witness for c in all_witnesses(spider, P, D)] == [(1, 3, 5)]


# ---------------------------------------------------------------------------
# refine
# ---------------------------------------------------------------------------

def test_refine_keeps_spider_witness(spider):
    P, D = _setup(spider)
    assert refine(spider, P, D, {1, 3, 5}) == frozenset({1, 3, 5})


def test_refine_rejects_singleton(p7):
    P, D = _setup(p7)
    with pytest.raises(InvalidWitness):
        refine(p7, P, D, {3})


def test_refine_rejects_invalid_subset(spider):
    P, D = _setup(spider)
    with pytest.raises(InvalidWitness):
        refine(spider, P, D, {1, 5})


def test_with_refined_records_subset(spider):
    P, D = _setup(spider)
    cert = find_witness(spider, P, D)
    assert cert.with_refined([5, 1, 3]).refined == (1, 3, 5)


# ---------------------------------------------------------------------------
# claim_case
# ---------------------------------------------------------------------------

def test_claim_case_leaf_neighbor():
    tree = canonical_member(5, 1, 2)
    P, D = _setup(tree)
    case = claim_case(tree, P, D)
    assert (case.kind, case.anchor, case.attach) == ("leaf_neighbor", 0, 3)


def test_claim_case_singleton(p7):
    P, D = _setup(p7)
    case = claim_case(p7, P, D)
    assert (case.kind, case.anchor, case.attach) == ("singleton", 3, 2)


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------

@PROPERTY_SETTINGS
@given(small_excess_trees())
def test_small_excess_trees_have_a_witness(tree):
    P, D = _setup(tree)
    assert find_witness(tree, P, D).valid


@PROPERTY_SETTINGS
@given(st.one_of(trees(min_m=4, max_m=12), small_excess_trees()))
def test_refined_witness_meets_degree_bound(tree):
    P, D = _setup(tree)
    for cert in all_witnesses(tree, P, D):
        if len(cert.witness) < 2:
            continue
        refined = refine(tree, P, D, cert.witness)
        assert refined and refined <= frozenset(cert.witness)
        F = induced_forest(tree, refined, P)
        assert F.is_tree()
        for v in refined:
            assert D.a(v) <= P.excess[v] + 1 - F.degree(v)
