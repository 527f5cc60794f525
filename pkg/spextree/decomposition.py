"""The J -> J1 -> J2 -> J' decomposition of the small partite set.

Steps, all working inside ``A``:

1. ``J``  = vertices with positive excess.
2. ``J1`` adds every ``A``-vertex strictly inside a path between two other
   ``A``-vertices, i.e. every ``A``-vertex with two non-leaf neighbours.
3. ``J2`` breaks every pair of remaining ``A``-vertices that share a
   neighbour. Pairs sharing the same neighbour form a clique; all members but
   the highest-labelled one move into ``J2``.
4. ``J'`` is the smallest superset of ``J2`` such that no vertex outside it
   sees two of its members at distance 2.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from .errors import InvalidSubset, NotConnected, VertexAbsent
from .trees import LabeledTree, TreeProfile, profile

log = logging.getLogger("spextree.decomposition")

EXACT_JPRIME_CAP = 24


@dataclass(frozen=True)
class InducedForest:
    """An induced subgraph of a tree, optionally rooted."""

    vertices: FrozenSet[int]
    edges: FrozenSet[Tuple[int, int]]
    root: Optional[int] = None

    def neighbors(self, v: int) -> List[int]:
        out = [b if a == v else a for a, b in self.edges if v in (a, b)]
        return sorted(out)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def adjacency(self) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for nbrs in adj.values():
            nbrs.sort()
        return adj

    def is_tree(self) -> bool:
        if not self.vertices:
            return False
        return len(self.edges) == len(self.vertices) - 1 and len(self.component_of(min(self.vertices))) == len(self.vertices)

    def component_of(self, v: int) -> Set[int]:
        adj = self.adjacency()
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def parents(self, root: int) -> Dict[int, Optional[int]]:
        """BFS parent map from ``root``; the root maps to None."""
        adj = self.adjacency()
        parent: Dict[int, Optional[int]] = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
        return parent

    def depths(self, root: int) -> Dict[int, int]:
        parent = self.parents(root)
        depth = {root: 0}
        queue = deque([root])
        adj = self.adjacency()
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if parent.get(w) == u:
                    depth[w] = depth[u] + 1
                    queue.append(w)
        return depth

    def children(self, root: int, v: int) -> List[int]:
        parent = self.parents(root)
        return sorted(w for w, p in parent.items() if p == v)


@dataclass(frozen=True)
class Decomposition:
    J: FrozenSet[int]
    J1: FrozenSet[int]
    J2: FrozenSet[int]
    Jprime: FrozenSet[int]
    Ai: Mapping[int, FrozenSet[int]] = field(hash=False, compare=False)
    greedy_fallback: bool = False

    def a(self, v: int) -> int:
        return len(self.Ai.get(v, frozenset()))

    def as_report(self) -> dict:
        return {
            "J": sorted(self.J),
            "J1": sorted(self.J1),
            "J2": sorted(self.J2),
            "Jprime": sorted(self.Jprime),
            "Ai": {str(v): sorted(self.Ai[v]) for v in sorted(self.Ai)},
            "greedy_fallback": self.greedy_fallback,
        }


def common_neighbor(tree: LabeledTree, u: int, v: int) -> Optional[int]:
    """The vertex adjacent to both ``u`` and ``v``, if any (unique in a tree)."""
    shared = set(tree.neighbors(u)) & set(tree.neighbors(v))
    return min(shared) if shared else None


def _second_neighbors(tree: LabeledTree, v: int) -> Set[int]:
    out: Set[int] = set()
    for w in tree.neighbors(v):
        out.update(x for x in tree.neighbors(w) if x != v)
    return out


def conflict_graph(tree: LabeledTree, P: TreeProfile, J1: Iterable[int]) -> List[FrozenSet[int]]:
    """Conflict cliques among ``A \\ J1``: groups sharing one neighbour.

    Every vertex outside ``J1`` has at most one non-leaf neighbour, so it lies
    in at most one clique and the cliques are vertex-disjoint.
    """
    rest = set(P.A) - set(J1)
    cliques = []
    for w in sorted(P.B):
        group = frozenset(x for x in tree.neighbors(w) if x in rest)
        if len(group) >= 2:
            cliques.append(group)
    return cliques


def _jprime_ok(second: Mapping[int, Set[int]], A: FrozenSet[int], chosen: Set[int]) -> bool:
    return all(len(second[v] & chosen) <= 1 for v in A if v not in chosen)


def decompose(tree: LabeledTree, P: Optional[TreeProfile] = None) -> Decomposition:
    if P is None:
        P = profile(tree)
    A = P.A

    # Step 1: positive excess
    J = frozenset(v for v in A if P.excess[v] > 0)

    # Step 2: interior A-vertices of long A-A paths
    interior = {v for v in A if sum(1 for w in tree.neighbors(v) if tree.degree(w) >= 2) >= 2}
    J1 = J | frozenset(interior)

    # Step 3: break shared-neighbour conflicts
    J2_set = set(J1)
    for clique in conflict_graph(tree, P, J1):
        keep = max(clique)
        J2_set.update(x for x in clique if x != keep)
    J2 = frozenset(J2_set)

    # Step 4: smallest superset with no double attachment
    second = {v: _second_neighbors(tree, v) & A for v in A}
    candidates = sorted(A - J2)
    greedy = len(candidates) > EXACT_JPRIME_CAP
    if greedy:
        log.debug("J' search over %d candidates exceeds %d, using greedy fallback", len(candidates), EXACT_JPRIME_CAP)
        chosen = set(J2)
        while True:
            violators = [v for v in sorted(A) if v not in chosen and len(second[v] & chosen) > 1]
            if not violators:
                break
            chosen.add(violators[0])
        Jprime = frozenset(chosen)
    else:
        Jprime = None
        for size in range(len(candidates) + 1):
            for extra in combinations(candidates, size):
                trial = set(J2) | set(extra)
                if _jprime_ok(second, A, trial):
                    Jprime = frozenset(trial)
                    break
            if Jprime is not None:
                break
        assert Jprime is not None  # A itself always qualifies

    Ai = {
        v: frozenset(u for u in A - Jprime if u in second[v])
        for v in sorted(Jprime)
    }
    return Decomposition(J, J1, J2, Jprime, Ai, greedy)


def induced_forest(tree: LabeledTree, I: Iterable[int], P: Optional[TreeProfile] = None) -> InducedForest:
    """T^I: the vertices of ``I`` plus middle vertices of length-2 paths inside ``I``."""
    if P is None:
        P = profile(tree)
    I = frozenset(I)
    stray = sorted(I - P.A)
    if stray:
        raise InvalidSubset(f"vertices {stray} are not in the small partite set")
    middles = {w for w in P.B if sum(1 for x in tree.neighbors(w) if x in I) >= 2}
    verts = frozenset(I | middles)
    edges = frozenset(e for e in tree.edges if e[0] in verts and e[1] in verts)
    return InducedForest(verts, edges)


def rooted_subtree(forest: InducedForest, root: int, v: int) -> InducedForest:
    """The part of ``forest`` hanging below ``v`` when rooted at ``root``."""
    for x in (root, v):
        if x not in forest.vertices:
            raise VertexAbsent(f"vertex {x} is not in the forest")
    if not forest.is_tree():
        raise NotConnected("rooted_subtree needs a connected forest")
    parent = forest.parents(root)
    below = set()
    for w in forest.vertices:
        x: Optional[int] = w
        while x is not None:
            if x == v:
                below.add(w)
                break
            x = parent[x]
    verts = frozenset(below)
    edges = frozenset(e for e in forest.edges if e[0] in verts and e[1] in verts)
    return InducedForest(verts, edges, root=v)
