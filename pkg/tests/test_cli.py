"""Tests for spextree.cli."""

import io
import json
import math

import networkx as nx
import pytest

from spextree.cli import run
from spextree.constructors import canonical_member
from spextree.graphs import graph_to_edge_list
from spextree.report import validate_report
from spextree.trees import parse_tree


def _run(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], stdout=buf)
    return code, buf.getvalue()


def _ok(*argv):
    code, out = _run(*argv)
    assert code == 0, out
    return json.loads(out)


@pytest.fixture
def write_graph(tmp_path):
    def _write(g, name):
        path = tmp_path / name
        path.write_text(graph_to_edge_list(g), encoding="utf-8")
        return path
    return _write


# ---------------------------------------------------------------------------
# Tree verbs
# ---------------------------------------------------------------------------

def test_analyze(write_edges, p7):
    data = _ok("analyze", "--tree", write_edges(p7))
    assert (data["m"], data["l"], data["delta"], data["t"]) == (7, 2, 2, 0)
    assert data["family"] == "path"
    assert validate_report(data, "profile") == []


def test_analyze_star(write_edges, k14):
    assert _ok("analyze", "--tree", write_edges(k14))["family"] == "star"


def test_analyze_writes_out_file(write_edges, p7, output_dir):
    target = output_dir / "profile.json"
    code, out = _run("analyze", "--tree", write_edges(p7), "--out", target)
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["m"] == 7


def test_decompose(write_edges, spider):
    data = _ok("decompose", "--tree", write_edges(spider))
    assert data["Jprime"] == [1, 3, 5]
    assert data["J2"] == [1, 3]
    assert validate_report(data, "decomposition") == []


def test_hypothesis_search(write_edges, p7):
    data = _ok("hypothesis", "--tree", write_edges(p7))
    assert data["witness"] == [3]
    assert data["valid"] is True
    assert data["refined"] == [3]


def test_hypothesis_singleton_witness_on_chain(write_edges, chain):
    data = _ok("hypothesis", "--tree", write_edges(chain))
    assert data["witness"] == [0]
    assert data["refined"] == [0]


def test_hypothesis_singleton_subset(write_edges, p7):
    data = _ok("hypothesis", "--tree", write_edges(p7), "--subset", "3")
    assert data["valid"] is True
    assert data["refined"] == [3]


def test_hypothesis_refines_multi_vertex_witness(write_edges, spider):
    data = _ok("hypothesis", "--tree", write_edges(spider))
    assert data["witness"] == [1, 3, 5]
    assert data["refined"] == [1, 3, 5]


def test_hypothesis_subset_check(write_edges, spider):
    data = _ok("hypothesis", "--tree", write_edges(spider), "--subset", "1,5")
    assert data["valid"] is False
    assert data["neighborhood_ok"] is False


def test_hypothesis_subset_outside_jprime(write_edges, p7):
    code, out = _run("hypothesis", "--tree", write_edges(p7), "--subset", "0")
    assert code == 1
    assert json.loads(out)["error"] == "NotSubsetOfJprime"


def test_hypothesis_without_witness(write_edges, double_star):
    data = _ok("hypothesis", "--tree", write_edges(double_star))
    assert data["witness"] is None
    assert data["valid"] is False


# ---------------------------------------------------------------------------
# embed
# ---------------------------------------------------------------------------

def test_embed_star_host(write_edges, p7):
    data = _ok("embed", "--tree", write_edges(p7))
    assert data["method"] == "constructive_star"
    assert data["verified"] is True
    assert data["map"]["3"] == 2


def test_embed_star_host_without_witness(write_edges, double_star):
    code, out = _run("embed", "--tree", write_edges(double_star))
    assert code == 1
    assert json.loads(out)["error"] == "InvalidCertificate"


def test_embed_join_high_degree(write_edges, write_graph, p7):
    h1 = write_graph(nx.complete_graph(2), "h1.txt")
    h2 = write_graph(nx.star_graph(5), "h2.txt")
    data = _ok("embed", "--tree", write_edges(p7), "--host", "join", h1, h2)
    assert data["method"] == "constructive_threshold"
    assert data["verified"] is True


def test_embed_join_low_degree_certificate(write_edges, write_graph, p7):
    h1 = write_graph(nx.complete_graph(2), "h1.txt")
    h2 = write_graph(nx.empty_graph(18), "h2.txt")
    data = _ok("embed", "--tree", write_edges(p7), "--host", "join", h1, h2)
    assert data["embeddable"] is False
    assert validate_report(data, "nonembeddable") == []


def test_embed_join_falls_back_to_search(write_edges, write_graph, p7):
    # three vertices in part one: neither certificate applies
    h1 = write_graph(nx.complete_graph(3), "h1.txt")
    h2 = write_graph(nx.empty_graph(6), "h2.txt")
    data = _ok("embed", "--tree", write_edges(p7), "--host", "join", h1, h2)
    assert data["method"] == "backtracking"


def test_embed_into_graph_file(write_edges, write_graph, p4):
    data = _ok("embed", "--tree", write_edges(p4), "--host", write_graph(nx.cycle_graph(5), "c5.txt"))
    assert data["method"] == "backtracking"
    data = _ok("embed", "--tree", write_edges(p4), "--host", write_graph(nx.complete_graph(3), "k3.txt"))
    assert data["t_free"] is True


def test_embed_join_needs_two_files(write_edges, write_graph, p7):
    h1 = write_graph(nx.complete_graph(2), "h1.txt")
    code, _ = _run("embed", "--tree", write_edges(p7), "--host", "join", h1)
    assert code == 2


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def test_construct_canonical():
    data = _ok("construct", "--family", "canonical", "--m", 7, "--l", 2, "--delta", 2)
    assert data["family"] == "canonical"
    assert data["profile"]["t"] == 0
    assert parse_tree(data["edge_list"]).vertex_count == 7
    assert validate_report(data, "tree") == []


def test_construct_caterpillar_and_lobster():
    data = _ok("construct", "--family", "caterpillar", "--k", 3, "--d1", 2, "--d2", 1)
    assert parse_tree(data["edge_list"]).vertex_count == 8
    data = _ok("construct", "--family", "lobster", "--spine", "2,2", "--pendant", 1)
    assert data["profile"]["m"] == 8
    assert (data["profile"]["l"], data["profile"]["delta"], data["profile"]["t"]) == (2, 2, 1)


def test_construct_random_is_seeded():
    args = ("construct", "--family", "random", "--m", 10, "--l", 3, "--delta", 2, "--seed", 1)
    assert _ok(*args) == _ok(*args)


def test_construct_combine(write_edges):
    first = write_edges(canonical_member(5, 1, 2), "first.txt")
    second = write_edges(canonical_member(9, 1, 2), "second.txt")
    data = _ok("construct", "--family", "combine", "--tree", first, "--tree2", second)
    assert data["profile"]["m"] == 14


@pytest.mark.parametrize("argv", [
    ("construct", "--family", "canonical", "--m", 7, "--l", 2),
    ("construct", "--family", "lobster", "--k", 2, "--d1", 2, "--d2", 2),
    ("construct", "--family", "caterpillar", "--spine", "2,x"),
])
def test_construct_usage_errors(argv):
    assert _run(*argv)[0] == 2


def test_construct_infeasible():
    code, out = _run("construct", "--family", "canonical", "--m", 5, "--l", 2, "--delta", 2)
    assert code == 1
    assert json.loads(out)["error"] == "InfeasibleFamily"


# ---------------------------------------------------------------------------
# bounds / oracle
# ---------------------------------------------------------------------------

def test_bounds(write_edges, p7):
    data = _ok("bounds", "--tree", write_edges(p7), "--n", 100)
    assert data["regime"] == "plain"
    assert data["upper"] == pytest.approx(15.0)
    assert data["window"][0] == pytest.approx(14.0)
    assert validate_report(data, "bounds") == []


def test_bounds_embeddable(write_edges, p7):
    data = _ok("bounds", "--tree", write_edges(p7), "--n", 100, "--embeddable")
    assert data["c"] == 12
    assert data["upper"] - data["lower"] == pytest.approx(0.24)


def test_bounds_needs_n(write_edges, p7):
    assert _run("bounds", "--tree", write_edges(p7))[0] == 2


def test_oracle_trees():
    data = _ok("oracle", "--kind", "trees", "--m", 6)
    assert data["count"] == 6
    assert len(data["trees"]) == 6


def test_oracle_trees_out_of_range():
    code, out = _run("oracle", "--kind", "trees", "--m", 13)
    assert code == 1
    assert json.loads(out)["error"] == "OutOfRange"


def test_oracle_spex(write_edges, p4):
    data = _ok("oracle", "--kind", "spex", "--tree", write_edges(p4), "--n", 5)
    assert data["lambda_max"] == pytest.approx(2.0)
    assert validate_report(data, "spex") == []


def test_oracle_free(write_edges, write_graph, p4):
    data = _ok("oracle", "--kind", "free", "--tree", write_edges(p4), "--host", write_graph(nx.cycle_graph(5), "c5.txt"))
    assert data["t_free"] is False
    assert validate_report(data, "verdict") == []


def test_oracle_free_needs_host(write_edges, p4):
    assert _run("oracle", "--kind", "free", "--tree", write_edges(p4))[0] == 2


def test_oracle_candidate(write_edges, p7):
    data = _ok("oracle", "--kind", "candidate", "--tree", write_edges(p7), "--n", 10)
    assert data["mode"] == "lower"
    assert data["regular"] is True
    assert data["lambda"] == pytest.approx((1 + math.sqrt(65)) / 2)
    assert data["certificate"]["embeddable"] is False


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

SWEEP = "campaigns = gap_asymptotics, f_consistency\nl_values = 1, 2\ndelta_values = 2\nd_values = 1\nn_values = 100\n"


def test_sweep_json(tmp_path):
    config = tmp_path / "sweep.conf"
    config.write_text(SWEEP, encoding="utf-8")
    data = _ok("sweep", "--config", config)
    assert data["campaigns"]["gap_asymptotics"]["cells"] == 2
    assert data["campaigns"]["gap_asymptotics"]["failures"] == 0
    assert data["campaigns"]["f_consistency"]["failures"] == 0
    assert validate_report(data, "sweep") == []


def test_sweep_csv_and_logs(tmp_path, output_dir):
    config = tmp_path / "sweep.conf"
    config.write_text(SWEEP, encoding="utf-8")
    code, out = _run("sweep", "--config", config, "--csv", "--log-dir", output_dir)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("name,")
    assert [line.split(",")[0] for line in lines[1:]] == ["f_consistency", "gap_asymptotics"]
    assert (output_dir / "sweep_log.txt").exists()
    assert not (output_dir / "failures.txt").exists()


def test_sweep_overrides_seed(tmp_path):
    config = tmp_path / "sweep.conf"
    config.write_text("campaigns = gap_asymptotics\nseed = 1\n", encoding="utf-8")
    assert _ok("sweep", "--config", config, "--seed", 9)["config"]["seed"] == 9


def test_sweep_bad_config(tmp_path):
    config = tmp_path / "sweep.conf"
    config.write_text("warp = 9\n", encoding="utf-8")
    code, out = _run("sweep", "--config", config)
    assert code == 1
    assert json.loads(out)["error"] == "ConfigError"


def test_sweep_needs_config():
    assert _run("sweep")[0] == 2


# ---------------------------------------------------------------------------
# Errors and exit codes
# ---------------------------------------------------------------------------

def test_missing_tree_flag():
    assert _run("analyze")[0] == 2


def test_unknown_command():
    assert _run("transmogrify")[0] == 2


def test_unreadable_tree_file(tmp_path):
    code, out = _run("analyze", "--tree", tmp_path / "absent.txt")
    assert code == 1
    error = json.loads(out)
    assert error["error"] == "ParseError"
    assert validate_report(error, "error") == []


def test_not_a_tree(write_edges):
    code, out = _run("analyze", "--tree", write_edges("0 1\n1 2\n2 0\n"))
    assert code == 1
    assert json.loads(out)["error"] == "NotATree"
