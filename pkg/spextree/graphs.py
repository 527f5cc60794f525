"""Host graph builders and the shared graph edge-list format."""

from typing import Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import BadLabel, DomainError, ParseError


def parse_graph(text: str) -> nx.Graph:
    """Parse ``u v`` lines; a ``# graph n=N`` header adds isolated vertices."""
    g = nx.Graph()
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
        if u == v:
            raise ParseError(f"line {lineno}: self-loop at {u}")
        g.add_edge(u, v)
    if declared is not None:
        if g.number_of_nodes() and max(g.nodes) >= declared:
            raise BadLabel(f"header declares n={declared} but label {max(g.nodes)} appears")
        g.add_nodes_from(range(declared))
    if g.number_of_nodes() == 0:
        raise ParseError("empty graph")
    return g


def graph_to_edge_list(g: nx.Graph) -> str:
    lines = [f"# graph n={g.number_of_nodes()}"]
    lines += [f"{min(u, v)} {max(u, v)}" for u, v in sorted((min(e), max(e)) for e in g.edges)]
    return "\n".join(lines) + "\n"


def max_degree(g: nx.Graph) -> int:
    return max((d for _, d in g.degree), default=0)


def normalize(g: nx.Graph, offset: int = 0) -> nx.Graph:
    """Relabel onto ``offset .. offset + n - 1`` in sorted node order."""
    mapping = {v: offset + i for i, v in enumerate(sorted(g.nodes))}
    return nx.relabel_nodes(g, mapping)


def join(g1: nx.Graph, g2: nx.Graph) -> nx.Graph:
    """``g1 v g2``: disjoint union plus every edge between the two parts.

    Part one occupies labels ``0 .. |g1| - 1``, part two follows.
    """
    a = normalize(g1)
    b = normalize(g2, a.number_of_nodes())
    out = nx.union(a, b)
    out.add_edges_from((u, v) for u in a.nodes for v in b.nodes)
    return out


def regular_or_almost(size: int, d: int) -> Tuple[nx.Graph, bool]:
    """A ``d``-regular graph on ``size`` vertices, or the nearest thing.

    Uses the circulant with offsets ``1 .. d // 2`` plus the antipodal offset
    for odd ``d``. When ``d * size`` is odd no regular graph exists; then one
    vertex gets degree ``d + 1`` and all others degree ``d``.
    Returns ``(graph, is_regular)``.
    """
    if d < 0:
        raise DomainError(f"degree must be non-negative, got {d}")
    if size < 0 or (size and size < d + 1):
        raise DomainError(f"no graph on {size} vertices has maximum degree {d}")
    g = nx.Graph()
    g.add_nodes_from(range(size))
    if d == 0 or size == 0:
        return g, True
    if (d * size) % 2 == 1:
        if size < d + 2:
            raise DomainError(f"no almost-{d}-regular graph on {size} vertices")
        sequence = [d + 1] + [d] * (size - 1)
        return nx.havel_hakimi_graph(sequence), False
    for i in range(size):
        for k in range(1, d // 2 + 1):
            g.add_edge(i, (i + k) % size)
        if d % 2 == 1:
            g.add_edge(i, (i + size // 2) % size)
    return g, True


def star_forest(copies: int, delta: int, offset: int = 0) -> nx.Graph:
    """``copies`` disjoint stars on ``delta`` vertices each (centre first)."""
    g = nx.Graph()
    for j in range(copies):
        centre = offset + j * delta
        g.add_node(centre)
        g.add_edges_from((centre, centre + i) for i in range(1, delta))
    return g


def disjoint_stars(k: int, d: int) -> nx.Graph:
    """``k`` disjoint copies of ``K_{1,d}``."""
    return star_forest(k, d + 1)


def split_graph(n: int, k: int, plus: bool = False) -> nx.Graph:
    """``K_k v (n-k) K_1``, with one extra edge in the big part when ``plus``."""
    if not 0 < k < n:
        raise DomainError(f"need 0 < k < n, got k={k}, n={n}")
    rest = nx.empty_graph(n - k)
    if plus:
        if n - k < 2:
            raise DomainError("the plus variant needs two vertices outside the clique")
        rest.add_edge(0, 1)
    return join(nx.complete_graph(k), rest)


def degree_counts(g: nx.Graph, d: int) -> int:
    return sum(1 for _, deg in g.degree if deg == d)


def edges_of(g: nx.Graph) -> List[Tuple[int, int]]:
    return sorted((min(u, v), max(u, v)) for u, v in g.edges)


def graph_from_edges(n: int, edges: Iterable[Sequence[int]]) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((int(u), int(v)) for u, v in edges)
    return g
