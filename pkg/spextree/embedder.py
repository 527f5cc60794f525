"""Embedding trees into join hosts.

Three ways in:

* ``embed_highdeg_join``: direct placement when part two has a vertex of
  degree at least delta.
* ``embed_star_host``: staged placement into ``K_l-bar v m S_delta`` driven by
  a hypothesis witness.
* ``find_embedding_exact``: complete backtracking, the oracle for everything.

``certify_nonembeddable`` is the counting argument for the other direction.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from .decomposition import Decomposition, common_neighbor, decompose, induced_forest
from .errors import (
    BudgetExceeded,
    ConditionsNotMet,
    InternalVerificationFailed,
    InvalidCertificate,
    InvalidWitness,
    PreconditionFailed,
    SearchCapExceeded,
)
from .graphs import max_degree, normalize, star_forest
from .trees import LabeledTree, TreeProfile, profile
from .witness import NoWitness, all_witnesses, refine

log = logging.getLogger("spextree.embedder")

DEFAULT_BUDGET = 10 ** 8

GENERAL = "general"
STAR_TAG = "Kl_join_mSdelta"


@dataclass(frozen=True, eq=False)
class JoinHost:
    """``part1 v part2``. Part one holds labels ``0..l-1``, part two the rest."""

    part1: nx.Graph
    part2: nx.Graph
    structure_tag: str = GENERAL
    star_copies: Optional[int] = None
    star_size: Optional[int] = None

    @property
    def part1_vertices(self) -> List[int]:
        return sorted(self.part1.nodes)

    @property
    def part2_vertices(self) -> List[int]:
        return sorted(self.part2.nodes)

    @property
    def n(self) -> int:
        return self.part1.number_of_nodes() + self.part2.number_of_nodes()

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.union(self.part1, self.part2)
        g.add_edges_from((u, v) for u in self.part1.nodes for v in self.part2.nodes)
        return g

    def to_networkx(self) -> nx.Graph:
        return self.graph.copy()

    def star_center(self, j: int) -> int:
        return self.part1.number_of_nodes() + j * self.star_size

    def star_leaves(self, j: int) -> List[int]:
        c = self.star_center(j)
        return list(range(c + 1, c + self.star_size))


def join_host(h1: nx.Graph, h2: nx.Graph, tag: str = GENERAL) -> JoinHost:
    a = normalize(h1)
    b = normalize(h2, a.number_of_nodes())
    return JoinHost(a, b, tag)


def star_host(l: int, copies: int, delta: int) -> JoinHost:
    """``K_l-bar v copies * S_delta`` with star ``j`` centred at ``l + j*delta``."""
    part1 = nx.empty_graph(l)
    part2 = star_forest(copies, delta, offset=l)
    return JoinHost(part1, part2, STAR_TAG, copies, delta)


@dataclass
class EmbeddingMap:
    mapping: Dict[int, int]
    method: str
    verified: bool = False
    witness: Optional[Tuple[int, ...]] = None

    def as_report(self) -> dict:
        out = {
            "method": self.method,
            "map": {str(k): self.mapping[k] for k in sorted(self.mapping)},
            "verified": self.verified,
        }
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


@dataclass
class EmbeddingSearch:
    """Outcome of a complete search: ``mapping`` is None when exhausted."""

    mapping: Optional[Dict[int, int]]
    expansions: int

    @property
    def found(self) -> bool:
        return self.mapping is not None

    @property
    def exhausted(self) -> bool:
        return self.mapping is None

    def as_embedding(self) -> Optional[EmbeddingMap]:
        if self.mapping is None:
            return None
        return EmbeddingMap(dict(self.mapping), "backtracking", True)


@dataclass(frozen=True)
class NonEmbeddabilityCertificate:
    delta: int
    l: int
    part2_max_degree: int
    vertices_at_delta_minus_one: int
    cases: Tuple[Mapping[str, int], ...] = field(compare=False)

    def as_report(self) -> dict:
        return {
            "embeddable": False,
            "delta": self.delta,
            "l": self.l,
            "part2_max_degree": self.part2_max_degree,
            "vertices_at_delta_minus_one": self.vertices_at_delta_minus_one,
            "cases": [dict(c) for c in self.cases],
        }


def _as_graph(obj: Union[LabeledTree, JoinHost, nx.Graph]) -> nx.Graph:
    if isinstance(obj, LabeledTree):
        return obj.to_networkx()
    if isinstance(obj, JoinHost):
        return obj.graph
    return obj


def verify_embedding(pattern, host, mapping: Mapping[int, int]) -> bool:
    pg = _as_graph(pattern)
    hg = _as_graph(host)
    if set(mapping) != set(pg.nodes):
        return False
    images = list(mapping.values())
    if len(set(images)) != len(images):
        return False
    if any(h not in hg for h in images):
        return False
    return all(hg.has_edge(mapping[u], mapping[v]) for u, v in pg.edges)


def _checked(tree: LabeledTree, host: JoinHost, mapping: Dict[int, int], method: str, witness=None) -> EmbeddingMap:
    if not verify_embedding(tree, host, mapping):
        raise InternalVerificationFailed(f"{method} produced an invalid map")
    return EmbeddingMap(mapping, method, True, witness)


# ---------------------------------------------------------------------------
# Degree threshold
# ---------------------------------------------------------------------------

def embed_highdeg_join(tree: LabeledTree, P: TreeProfile, host: JoinHost) -> EmbeddingMap:
    part1 = host.part1_vertices
    part2 = host.part2_vertices
    if len(part1) != P.l:
        raise PreconditionFailed(f"part one has {len(part1)} vertices, need l = {P.l}")
    if host.n < P.m:
        raise PreconditionFailed(f"host has {host.n} vertices, tree has {P.m}")
    if max_degree(host.part2) < P.delta:
        raise PreconditionFailed(f"part two has maximum degree {max_degree(host.part2)} < delta = {P.delta}")

    v = min(x for x in P.A if tree.degree(x) == P.delta)
    v_star = min(h for h in part2 if host.part2.degree(h) >= P.delta)
    mapping = {v: v_star}
    for x, h in zip(tree.neighbors(v), sorted(host.part2[v_star])):
        mapping[x] = h

    used = set(mapping.values())
    free2 = [h for h in part2 if h not in used]
    rest_b = sorted(P.B - set(tree.neighbors(v)))
    mapping.update(zip(rest_b, free2))
    mapping.update(zip(sorted(P.A - {v}), part1))
    return _checked(tree, host, mapping, "constructive_threshold")


def certify_nonembeddable(tree: Optional[LabeledTree], P: TreeProfile, host: JoinHost) -> NonEmbeddabilityCertificate:
    """Counting argument: with ``p`` A-vertices in part two, at least ``p`` of
    their neighbours must land in part one, leaving ``l + 1 - p`` A-vertices
    for ``l - p`` slots."""
    if host.part1.number_of_nodes() != P.l:
        raise PreconditionFailed(f"part one has {host.part1.number_of_nodes()} vertices, need l = {P.l}")
    if tree is not None and tree.vertex_count != P.m:
        raise PreconditionFailed("profile does not belong to this tree")
    delta = P.delta
    if delta < 2:
        raise ConditionsNotMet("delta = 1 leaves no room for the counting argument")
    top = max_degree(host.part2)
    at_top = sum(1 for _, d in host.part2.degree if d == delta - 1)
    if top > delta - 1 or at_top > 1:
        raise ConditionsNotMet(
            f"part two has maximum degree {top} and {at_top} vertices of degree {delta - 1}"
        )
    cases = tuple(
        {
            "p": p,
            "neighbors_needed": p * (delta - 1) + 1,
            "absorbable_in_part2": p * (delta - 2) + 1,
            "forced_into_part1": p,
            "a_vertices_left": P.l + 1 - p,
            "part1_room": P.l - p,
        }
        for p in range(1, P.l + 2)
    )
    return NonEmbeddabilityCertificate(delta, P.l, top, at_top, cases)


# ---------------------------------------------------------------------------
# Star host
# ---------------------------------------------------------------------------

class _Placement:
    """Bookkeeping for one staged placement into a star host."""

    def __init__(self, host: JoinHost):
        self.host = host
        self.mapping: Dict[int, int] = {}
        self.part1 = list(host.part1_vertices)
        self.next_star = 0

    def to_part1(self, x: int) -> bool:
        if x in self.mapping:
            return True
        if not self.part1:
            return False
        self.mapping[x] = self.part1.pop(0)
        return True

    def to_center(self, x: int) -> int:
        j = self.next_star
        self.next_star += 1
        self.mapping[x] = self.host.star_center(j)
        return j

    def to_leaves(self, xs: Sequence[int], star: int) -> bool:
        slots = self.host.star_leaves(star)
        if len(xs) > len(slots):
            return False
        self.mapping.update(zip(xs, slots))
        return True

    def finish(self, tree: LabeledTree, P: TreeProfile) -> bool:
        """Remaining A-vertices to part one, remaining B-vertices to spare centres."""
        for x in sorted(P.A):
            if x not in self.mapping and not self.to_part1(x):
                return False
        used = set(self.mapping.values())
        spare = (h for h in self.host.part2_vertices if h not in used)
        for x in sorted(P.B):
            if x not in self.mapping:
                h = next(spare, None)
                if h is None:
                    return False
                self.mapping[x] = h
        return True


def _place_single(tree: LabeledTree, P: TreeProfile, D: Decomposition, v: int, host: JoinHost) -> Optional[Dict[int, int]]:
    t_v = P.excess[v]
    chosen = sorted(D.Ai[v])[: t_v + 1]
    if len(chosen) < t_v + 1:
        return None
    place = _Placement(host)
    star_v = place.to_center(v)
    shared = {}
    for a in chosen:
        c = common_neighbor(tree, v, a)
        shared[a] = c
        place.to_center(a)
        if not place.to_part1(c):
            return None
    rest = [x for x in tree.neighbors(v) if x not in shared.values()]
    if not place.to_leaves(rest, star_v):
        return None
    for j, a in enumerate(chosen, start=1):
        if not place.to_leaves([x for x in tree.neighbors(a) if x != shared[a]], j):
            return None
    if not place.finish(tree, P):
        return None
    return place.mapping


def _place_multi(tree: LabeledTree, P: TreeProfile, D: Decomposition, I: FrozenSet[int], host: JoinHost) -> Optional[Dict[int, int]]:
    F = induced_forest(tree, I, P)
    root = min(I)
    depth = F.depths(root)
    order = sorted(I, key=lambda v: (depth[v], v))
    place = _Placement(host)

    # 1. I' onto star centres
    star_of = {v: place.to_center(v) for v in order}
    # 2. middle vertices of T^{I'} into part one
    for w in sorted(F.vertices - I, key=lambda x: (depth[x], x)):
        if not place.to_part1(w):
            return None
    # 3. A_i onto fresh centres, common neighbours into part one
    shared: Dict[int, int] = {}
    for v in order:
        for a in sorted(D.Ai[v]):
            star_of[a] = place.to_center(a)
            shared[a] = common_neighbor(tree, v, a)
            if not place.to_part1(shared[a]):
                return None
    # 4. the rest of N(v_i): leaves top up part one, everything else fills the star
    for v in order:
        taken = set(F.neighbors(v)) | {shared[a] for a in D.Ai[v]}
        rest = [x for x in tree.neighbors(v) if x not in taken]
        extra = P.excess[v] + 1 - F.degree(v) - D.a(v)
        pendant = [x for x in rest if tree.degree(x) == 1]
        if extra < 0 or len(pendant) < extra:
            return None
        for x in pendant[:extra]:
            if not place.to_part1(x):
                return None
        if not place.to_leaves([x for x in rest if x not in place.mapping], star_of[v]):
            return None
    # 5. neighbours of A_i fill their own stars
    for v in order:
        for a in sorted(D.Ai[v]):
            if not place.to_leaves([x for x in tree.neighbors(a) if x != shared[a]], star_of[a]):
                return None
    if not place.finish(tree, P):
        return None
    return place.mapping


def _unsupported_reason(P: TreeProfile) -> Optional[str]:
    if P.l == 0:
        return f"the host has maximum degree {P.delta - 1} while K_1,{P.delta} needs {P.delta}"
    if P.delta == 1:
        return "the host is K_l,m and both partite sets of the tree exceed l"
    return None


def embed_star_host(
    tree: LabeledTree,
    P: Optional[TreeProfile] = None,
    D: Optional[Decomposition] = None,
    cert=None,
    budget: int = DEFAULT_BUDGET,
) -> EmbeddingMap:
    """Embed into ``K_l-bar v m S_delta`` following a hypothesis witness.

    When the staged placement for the refined witness runs out of room, the
    other valid witnesses are tried in search order; as a last resort the
    exact search is run on the same host.
    """
    if P is None:
        P = profile(tree)
    if D is None:
        D = decompose(tree, P)
    reason = _unsupported_reason(P)
    if reason:
        raise InvalidCertificate(f"no tree with these parameters embeds: {reason}", reason=reason)
    if cert is None or isinstance(cert, NoWitness) or not cert.valid:
        why = getattr(cert, "reason", "") or "no witness supplied"
        raise InvalidCertificate(f"certificate is not a valid witness: {why}", reason=why)

    host = star_host(P.l, P.m, P.delta)
    tried = []
    for candidate in _witness_sequence(tree, P, D, cert):
        I = frozenset(candidate.witness)
        tried.append(candidate.witness)
        if len(I) == 1:
            mapping = _place_single(tree, P, D, next(iter(I)), host)
            used = candidate.witness
        else:
            try:
                refined = refine(tree, P, D, I)
            except InvalidWitness:
                continue
            if len(refined) > 1:
                mapping = _place_multi(tree, P, D, refined, host)
            else:
                mapping = _place_single(tree, P, D, next(iter(refined)), host)
            used = tuple(sorted(refined))
        if mapping is not None:
            if len(tried) > 1:
                log.info("witness %s did not place; used %s", tried[0], used)
            return _checked(tree, host, mapping, "constructive_star", used)

    log.warning("no staged placement fits for a %d-vertex tree; falling back to exact search", P.m)
    search = find_embedding_exact(tree, host, budget)
    if search.mapping is None:
        raise InternalVerificationFailed(f"tree with witness {cert.witness} does not embed into the star host")
    return _checked(tree, host, search.mapping, "backtracking", cert.witness)


def _witness_sequence(tree, P, D, cert):
    yield cert
    try:
        for other in all_witnesses(tree, P, D):
            if other.witness != cert.witness:
                yield other
    except SearchCapExceeded:
        return


# ---------------------------------------------------------------------------
# Exact search
# ---------------------------------------------------------------------------

def _search_order(pg: nx.Graph) -> List[Tuple[int, Optional[int]]]:
    """Pattern vertices with the already-placed neighbour each hangs from.

    Each component starts at its highest-degree vertex; afterwards the next
    vertex is the unplaced neighbour with most placed neighbours, then
    highest degree, then lowest label.
    """
    order: List[Tuple[int, Optional[int]]] = []
    placed: Set[int] = set()
    remaining = set(pg.nodes)
    while remaining:
        start = min(remaining, key=lambda v: (-pg.degree(v), v))
        order.append((start, None))
        placed.add(start)
        remaining.discard(start)
        frontier = set(pg[start]) & remaining
        while frontier:
            nxt = min(
                frontier,
                key=lambda v: (-sum(1 for w in pg[v] if w in placed), -pg.degree(v), v),
            )
            anchor = min(w for w in pg[nxt] if w in placed)
            order.append((nxt, anchor))
            placed.add(nxt)
            remaining.discard(nxt)
            frontier.discard(nxt)
            frontier |= set(pg[nxt]) & remaining
    return order


def _twin_classes(hg: nx.Graph) -> Dict[int, Tuple]:
    """Vertices with equal open or equal closed neighbourhoods share a class."""
    open_groups: Dict[FrozenSet[int], List[int]] = {}
    closed_groups: Dict[FrozenSet[int], List[int]] = {}
    for h in hg.nodes:
        nbrs = frozenset(hg[h])
        open_groups.setdefault(nbrs, []).append(h)
        closed_groups.setdefault(nbrs | {h}, []).append(h)
    cls: Dict[int, Tuple] = {}
    for h in hg.nodes:
        nbrs = frozenset(hg[h])
        if len(open_groups[nbrs]) > 1:
            cls[h] = ("open", min(open_groups[nbrs]))
        elif len(closed_groups[nbrs | {h}]) > 1:
            cls[h] = ("closed", min(closed_groups[nbrs | {h}]))
        else:
            cls[h] = ("self", h)
    return cls


def find_embedding_exact(pattern, host, budget: int = DEFAULT_BUDGET) -> EmbeddingSearch:
    """Complete backtracking over injective edge-preserving maps.

    Among interchangeable (twin) host vertices only one unused representative
    is tried per step, which keeps the search complete.
    Raises :class:`BudgetExceeded` after ``budget`` candidate expansions.
    """
    pg = _as_graph(pattern)
    hg = _as_graph(host)
    if pg.number_of_nodes() > hg.number_of_nodes():
        return EmbeddingSearch(None, 0)

    h_adj = {h: set(hg[h]) for h in hg.nodes}
    h_deg = {h: len(h_adj[h]) for h in hg.nodes}
    p_adj = {v: set(pg[v]) for v in pg.nodes}
    p_deg = {v: len(p_adj[v]) for v in pg.nodes}
    twin = _twin_classes(hg)
    order = _search_order(pg)
    all_hosts = sorted(hg.nodes, key=lambda h: (h_deg[h], h))

    mapping: Dict[int, int] = {}
    used: Set[int] = set()
    expansions = 0

    def fits(v: int, h: int) -> bool:
        if h in used or h_deg[h] < p_deg[v]:
            return False
        pending = 0
        for w in p_adj[v]:
            if w in mapping:
                if mapping[w] not in h_adj[h]:
                    return False
            else:
                pending += 1
        free = sum(1 for x in h_adj[h] if x not in used)
        return free >= pending

    def extend(i: int) -> bool:
        nonlocal expansions
        if i == len(order):
            return True
        v, anchor = order[i]
        if anchor is None:
            pool = all_hosts
        else:
            pool = sorted(h_adj[mapping[anchor]], key=lambda h: (h_deg[h], h))
        tried = set()
        for h in pool:
            if not fits(v, h):
                continue
            if twin[h] in tried:
                continue
            tried.add(twin[h])
            expansions += 1
            if expansions > budget:
                raise BudgetExceeded(f"search exceeded {budget} expansions", expansions=expansions)
            mapping[v] = h
            used.add(h)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(h)
        return False

    if extend(0):
        return EmbeddingSearch(dict(mapping), expansions)
    return EmbeddingSearch(None, expansions)
