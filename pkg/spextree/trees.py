"""Labelled trees, edge-list parsing and the (m, l, delta, t) profile."""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import BadLabel, DomainError, NotATree, ParseError

Edge = Tuple[int, int]


@dataclass(frozen=True)
class LabeledTree:
    """A tree on vertices ``0 .. vertex_count - 1``.

    Edges are stored as ``(min, max)`` pairs. Construction validates that the
    edge set really is a spanning tree, so every instance is safe to use.
    """

    vertex_count: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.vertex_count < 1:
            raise NotATree("a tree needs at least one vertex")
        normalized = set()
        for u, v in self.edges:
            if u < 0 or v < 0 or u >= self.vertex_count or v >= self.vertex_count:
                raise BadLabel(f"edge ({u}, {v}) uses a label outside 0..{self.vertex_count - 1}")
            if u == v:
                raise NotATree(f"self-loop at vertex {u}")
            e = (min(u, v), max(u, v))
            if e in normalized:
                raise NotATree(f"duplicate edge {e}")
            normalized.add(e)
        if len(normalized) != self.vertex_count - 1:
            raise NotATree(
                f"{self.vertex_count} vertices need {self.vertex_count - 1} edges, got {len(normalized)}"
            )
        object.__setattr__(self, "edges", frozenset(normalized))
        if not _connected(self.vertex_count, normalized):
            raise NotATree("edge set is disconnected")

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        adj: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(nbrs)) for nbrs in adj)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def distances_from(self, source: int) -> List[int]:
        """BFS distances from ``source`` to every vertex."""
        dist = [-1] * self.vertex_count
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.adjacency[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def path(self, source: int, target: int) -> List[int]:
        """The unique source-target path, endpoints included."""
        parent = {source: source}
        queue = deque([source])
        while queue and target not in parent:
            u = queue.popleft()
            for w in self.adjacency[u]:
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
        out = [target]
        while out[-1] != source:
            out.append(parent[out[-1]])
        return out[::-1]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(sorted(self.edges))
        return g


def _connected(n: int, edges: Iterable[Edge]) -> bool:
    adj: Dict[int, List[int]] = {v: [] for v in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def make_tree(edges: Iterable[Sequence[int]], vertex_count: Optional[int] = None) -> LabeledTree:
    """Build a tree from an edge iterable; the vertex count defaults to max label + 1."""
    pairs = [(int(u), int(v)) for u, v in edges]
    if vertex_count is None:
        vertex_count = 1 + max((max(e) for e in pairs), default=0)
    return LabeledTree(vertex_count, frozenset(pairs))


def parse_tree(text: str) -> LabeledTree:
    """Parse the edge-list format: one ``u v`` pair per line.

    Blank lines and ``#`` comments are ignored. A ``# tree n=1`` header is the
    only way to write the single-vertex tree.
    """
    pairs: List[Edge] = []
    declared: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                if token.startswith("n="):
                    try:
                        declared = int(token[2:])
                    except ValueError:
                        raise ParseError(f"line {lineno}: bad vertex count {token!r}")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected two labels, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: labels must be integers, got {line!r}")
        if u < 0 or v < 0:
            raise BadLabel(f"line {lineno}: negative label in {line!r}")
        pairs.append((u, v))

    if not pairs:
        if declared == 1:
            return LabeledTree(1, frozenset())
        raise ParseError("no edges found")

    used = {x for e in pairs for x in e}
    n = max(used) + 1
    if declared is not None and declared != n:
        raise BadLabel(f"header declares n={declared} but labels span 0..{n - 1}")
    missing = sorted(set(range(n)) - used)
    if missing:
        raise BadLabel(f"labels are not dense: missing {missing[:5]}")
    return make_tree(pairs, n)


def to_edge_list(tree: LabeledTree, header: Optional[str] = None) -> str:
    """Inverse of :func:`parse_tree`."""
    lines = [f"# tree n={tree.vertex_count}" if header is None else header]
    lines += [f"{u} {v}" for u, v in sorted(tree.edges)]
    return "\n".join(lines) + "\n"


def from_networkx(g: nx.Graph) -> LabeledTree:
    """Relabel a networkx tree onto ``0..n-1`` following sorted node order."""
    order = {v: i for i, v in enumerate(sorted(g.nodes))}
    return make_tree(((order[u], order[v]) for u, v in g.edges), len(order))


def relabel(tree: LabeledTree, perm: Mapping[int, int]) -> LabeledTree:
    """Apply a vertex permutation (old label -> new label)."""
    if sorted(perm[v] for v in tree.vertices) != list(tree.vertices):
        raise BadLabel("relabelling is not a permutation of the vertex set")
    return make_tree(((perm[u], perm[v]) for u, v in tree.edges), tree.vertex_count)


def random_tree(m: int, seed: Optional[int] = None) -> LabeledTree:
    """Uniform labelled tree on ``m`` vertices via a random Prufer sequence."""
    if m < 1:
        raise DomainError("random_tree needs m >= 1")
    if m == 1:
        return LabeledTree(1, frozenset())
    if m == 2:
        return make_tree([(0, 1)])
    rng = np.random.default_rng(seed)
    sequence = rng.integers(0, m, size=m - 2).tolist()
    return from_networkx(nx.from_prufer_sequence(sequence))


def is_path(tree: LabeledTree) -> bool:
    return all(tree.degree(v) <= 2 for v in tree.vertices)


def is_star(tree: LabeledTree) -> bool:
    if tree.vertex_count <= 2:
        return True
    return max(tree.degree(v) for v in tree.vertices) == tree.vertex_count - 1


# ---------------------------------------------------------------------------
# Profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeProfile:
    """Parameters of a tree in the family T(m, l, delta, t).

    ``A`` is the smaller partite set (the class of vertex 0 on ties), so
    ``l = |A| - 1``. ``excess[v] = deg(v) - delta`` for every ``v`` in ``A``.
    """

    m: int
    A: FrozenSet[int]
    B: FrozenSet[int]
    l: int
    delta: int
    t: int
    excess: Mapping[int, int] = field(hash=False, compare=False)

    @property
    def in_small_excess_family(self) -> bool:
        return self.t < self.l

    def as_report(self) -> dict:
        return {
            "m": self.m,
            "l": self.l,
            "delta": self.delta,
            "t": self.t,
            "A": sorted(self.A),
            "B": sorted(self.B),
            "excess": {str(v): self.excess[v] for v in sorted(self.excess)},
            "t_lt_l": self.t < self.l,
            "feasible": family_feasible(self.m, self.l, self.delta),
        }


def bipartition(tree: LabeledTree) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """The two colour classes; the first one contains vertex 0."""
    dist = tree.distances_from(0)
    even = frozenset(v for v in tree.vertices if dist[v] % 2 == 0)
    odd = frozenset(v for v in tree.vertices if dist[v] % 2 == 1)
    return even, odd


def profile(tree: LabeledTree) -> TreeProfile:
    if tree.vertex_count < 2:
        raise DomainError("profiles are defined for trees with at least two vertices")
    own, other = bipartition(tree)
    A, B = (own, other) if len(own) <= len(other) else (other, own)
    delta = min(tree.degree(v) for v in A)
    excess = {v: tree.degree(v) - delta for v in sorted(A)}
    l = len(A) - 1
    t = tree.vertex_count - 1 - (l + 1) * delta
    return TreeProfile(tree.vertex_count, A, B, l, delta, t, excess)


def family_feasible(m: int, l: int, delta: int) -> bool:
    """Whether T(m, l, delta) contains any tree."""
    if delta < 1 or l < 0:
        return False
    if l == 0:
        return m == delta + 1
    return m >= max(2 * l + 2, (l + 1) * delta + 1)
