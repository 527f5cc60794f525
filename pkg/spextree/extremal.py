"""Exhaustive oracles at desk scale: trees, small graphs, T-freeness and spex."""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import networkx as nx

from .embedder import DEFAULT_BUDGET, JoinHost, NonEmbeddabilityCertificate, certify_nonembeddable, find_embedding_exact, join_host, star_host
from .errors import DeltaTooSmall, DomainError, OutOfRange, TooLarge
from .graphs import disjoint_stars, graph_from_edges, regular_or_almost
from .spectral import spectral_radius
from .trees import LabeledTree, TreeProfile, from_networkx, profile, to_edge_list

log = logging.getLogger("spextree.extremal")

TREE_ENUM_MAX_M = 12
BRUTE_FORCE_MAX_N = 8
GRAPH_ENUM_MAX_N = 12
LAMBDA_TIE = 1e-9


def enumerate_trees(m: int) -> Iterator[LabeledTree]:
    """One tree per isomorphism class on ``m`` vertices."""
    if not 1 <= m <= TREE_ENUM_MAX_M:
        raise OutOfRange(f"tree enumeration covers 1 <= m <= {TREE_ENUM_MAX_M}, got {m}")
    if m == 1:
        yield LabeledTree(1, frozenset())
        return
    for g in nx.nonisomorphic_trees(m):
        yield from_networkx(g)


def trees_up_to(m_max: int) -> Iterator[LabeledTree]:
    for m in range(1, m_max + 1):
        yield from enumerate_trees(m)


# ---------------------------------------------------------------------------
# Small graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmallGraph:
    """Simple graph on ``0..vertex_count-1`` as neighbour bitmasks."""

    vertex_count: int
    adjacency: Tuple[int, ...]

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "SmallGraph":
        nodes = sorted(g.nodes)
        index = {v: i for i, v in enumerate(nodes)}
        masks = [0] * len(nodes)
        for u, v in g.edges:
            masks[index[u]] |= 1 << index[v]
            masks[index[v]] |= 1 << index[u]
        return cls(len(nodes), tuple(masks))

    def degree(self, v: int) -> int:
        return bin(self.adjacency[v]).count("1")

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in range(u + 1, self.vertex_count)
                if self.adjacency[u] >> v & 1]

    def to_networkx(self) -> nx.Graph:
        return graph_from_edges(self.vertex_count, self.edges())

    def graph6(self) -> str:
        return nx.to_graph6_bytes(self.to_networkx(), header=False).decode().strip()


def _invariant(g: nx.Graph) -> Tuple:
    degrees = tuple(sorted(d for _, d in g.degree))
    return degrees, nx.weisfeiler_lehman_graph_hash(g, iterations=3)


@lru_cache(maxsize=None)
def _graphs(n: int, max_degree: Optional[int]) -> Tuple[SmallGraph, ...]:
    if n == 0:
        return (SmallGraph(0, ()),)
    found: List[SmallGraph] = []
    buckets: Dict[Tuple, List[nx.Graph]] = {}
    cap = n - 1 if max_degree is None else max_degree
    for base in _graphs(n - 1, max_degree):
        degs = [base.degree(v) for v in range(n - 1)]
        open_slots = [v for v in range(n - 1) if degs[v] < cap]
        for k in range(0, min(cap, n - 1) + 1):
            for nbrs in combinations(open_slots, k):
                chosen = set(nbrs)
                # the new vertex must have minimum degree
                if any(degs[v] + (v in chosen) < k for v in range(n - 1)):
                    continue
                masks = list(base.adjacency) + [0]
                for v in nbrs:
                    masks[v] |= 1 << (n - 1)
                    masks[n - 1] |= 1 << v
                cand = SmallGraph(n, tuple(masks))
                g = cand.to_networkx()
                key = _invariant(g)
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(g, other) for other in bucket):
                    continue
                bucket.append(g)
                found.append(cand)
    log.debug("%d graphs on %d vertices (max degree %s)", len(found), n, max_degree)
    return tuple(found)


def enumerate_graphs(n: int, max_degree: Optional[int] = None) -> Tuple[SmallGraph, ...]:
    """All graphs on ``n`` vertices up to isomorphism, optionally with bounded degree.

    Each graph is grown from a smaller one by adding a vertex of minimum
    degree; isomorphic duplicates are rejected by invariant bucket plus an
    exact isomorphism test.
    """
    limit = BRUTE_FORCE_MAX_N if max_degree is None or max_degree > 2 else GRAPH_ENUM_MAX_N
    if not 0 <= n <= limit:
        raise OutOfRange(f"graph enumeration covers n <= {limit} here, got {n}")
    return _graphs(n, max_degree)


def has_disjoint_stars(g: nx.Graph, k: int, d: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether ``g`` contains ``k`` vertex-disjoint copies of ``K_{1,d}``."""
    if k <= 0:
        return True
    return find_embedding_exact(disjoint_stars(k, d), g, budget).found


# ---------------------------------------------------------------------------
# T-freeness and candidates
# ---------------------------------------------------------------------------

@dataclass
class TFreeVerdict:
    t_free: bool
    witness: Optional[Dict[int, int]] = None
    expansions: int = 0

    def as_report(self) -> dict:
        out = {"t_free": self.t_free, "expansions": self.expansions}
        if self.witness is not None:
            out["witness"] = {str(k): self.witness[k] for k in sorted(self.witness)}
        return out


def certify_T_free(g, tree: LabeledTree, budget: int = DEFAULT_BUDGET) -> TFreeVerdict:
    search = find_embedding_exact(tree, g, budget)
    return TFreeVerdict(search.exhausted, search.mapping, search.expansions)


@dataclass
class Candidate:
    host: JoinHost
    mode: str
    certificate: Optional[NonEmbeddabilityCertificate] = None
    regular: bool = True

    @property
    def graph(self) -> nx.Graph:
        return self.host.graph


def build_candidate(P: TreeProfile, n: int, mode: str = "lower") -> Candidate:
    """``lower``: ``K_l v H`` with ``H`` (delta-2)-regular, or one vertex at
    delta-1 when parity forbids it. ``star_host``: ``K_l-bar v m S_delta``."""
    if mode == "star_host":
        return Candidate(star_host(P.l, P.m, P.delta), mode)
    if mode != "lower":
        raise DomainError(f"unknown candidate mode {mode!r}")
    if P.delta < 2:
        raise DeltaTooSmall("the lower candidate needs delta >= 2")
    if n <= P.l:
        raise DomainError(f"need n > l, got n={n}, l={P.l}")
    rest, regular = regular_or_almost(n - P.l, P.delta - 2)
    host = join_host(nx.complete_graph(P.l), rest)
    return Candidate(host, mode, certify_nonembeddable(None, P, host), regular)


# ---------------------------------------------------------------------------
# Brute-force spex
# ---------------------------------------------------------------------------

@dataclass
class SpexReport:
    n: int
    tree: str
    lambda_max: float
    extremal_graphs: List[str] = field(default_factory=list)
    candidate_lambda: Optional[float] = None
    graphs_examined: int = 0

    @property
    def agrees(self) -> Optional[bool]:
        if self.candidate_lambda is None:
            return None
        return abs(self.lambda_max - self.candidate_lambda) <= LAMBDA_TIE

    def as_report(self) -> dict:
        return {
            "n": self.n,
            "tree": self.tree,
            "lambda_max": self.lambda_max,
            "extremal_graphs": self.extremal_graphs,
            "candidate_lambda": self.candidate_lambda,
            "agrees": self.agrees,
            "graphs_examined": self.graphs_examined,
        }


def brute_force_spex(
    n: int,
    tree: LabeledTree,
    budget: int = DEFAULT_BUDGET,
    progress_cb: Optional[Callable[[int, int], None]] = None,
) -> SpexReport:
    """Largest spectral radius over T-free graphs on ``n`` vertices.

    Graphs are visited in decreasing spectral radius; the scan stops once the
    radius drops below the best T-free value found.
    """
    if n > BRUTE_FORCE_MAX_N:
        raise TooLarge(f"brute force covers n <= {BRUTE_FORCE_MAX_N}, got {n}")
    if n < 1:
        raise DomainError("n must be positive")
    graphs = enumerate_graphs(n)
    ranked = sorted(
        ((spectral_radius(g.to_networkx()).lam, i, g) for i, g in enumerate(graphs)),
        key=lambda item: (-item[0], item[1]),
    )
    best: Optional[float] = None
    winners: List[str] = []
    examined = 0
    for lam, _, g in ranked:
        if best is not None and lam < best - LAMBDA_TIE:
            break
        examined += 1
        if progress_cb:
            progress_cb(examined, len(ranked))
        if certify_T_free(g.to_networkx(), tree, budget).t_free:
            if best is None:
                best = lam
            winners.append(g.graph6())

    candidate = None
    if tree.vertex_count >= 2:
        P = profile(tree)
        try:
            cand = build_candidate(P, n, "lower")
            candidate = spectral_radius(cand.graph).lam
        except (DeltaTooSmall, DomainError):
            candidate = None
    return SpexReport(n, to_edge_list(tree).strip(), best if best is not None else 0.0, winners, candidate, examined)
