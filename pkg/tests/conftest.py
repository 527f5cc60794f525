"""Shared fixtures for the test suite."""

import pytest

from spextree.constructors import canonical_member, chain_member
from spextree.trees import make_tree, to_edge_list


@pytest.fixture
def p4():
    """Path 0-1-2-3: l = 1, delta = 1, t = 1."""
    return make_tree([(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def p6():
    return make_tree([(i, i + 1) for i in range(5)])


@pytest.fixture
def p7():
    """Path 0-1-...-6: A = {1, 3, 5}, l = 2, delta = 2, t = 0."""
    return make_tree([(i, i + 1) for i in range(6)])


@pytest.fixture
def k14():
    """Star K_{1,4} centred at 0."""
    return make_tree([(0, 1), (0, 2), (0, 3), (0, 4)])


@pytest.fixture
def spider():
    """Three legs of length 2 around vertex 0; A = {1, 3, 5}."""
    return make_tree([(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])


@pytest.fixture
def chain():
    """chain_member(9, 2): l = 2, delta = 2, t = 2, singleton witness at 0."""
    return chain_member(9, 2)


@pytest.fixture
def double_star():
    """canonical_member(9, 1, 2): l = 1, t = 4, no witness, does not embed."""
    return canonical_member(9, 1, 2)


@pytest.fixture
def write_edges(tmp_path):
    """Write a tree (or raw text) to an edge-list file and return its path."""
    def _write(tree_or_text, name="tree.txt"):
        text = tree_or_text if isinstance(tree_or_text, str) else to_edge_list(tree_or_text)
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


@pytest.fixture
def output_dir(tmp_path):
    """Provide a clean output directory."""
    out = tmp_path / "output"
    out.mkdir()
    return out
