"""Generators for trees with a prescribed (m, l, delta) profile."""

import logging
from dataclasses import dataclass
from math import ceil
from typing import List, Optional, Tuple

import numpy as np

from .decomposition import decompose
from .errors import (
    DeltaIsOne,
    DeltaMismatch,
    HypothesisMissing,
    InfeasibleFamily,
    InternalVerificationFailed,
    SpecInvalid,
    UnsupportedParameters,
)
from .trees import LabeledTree, bipartition, family_feasible, make_tree, profile
from .witness import HypothesisCertificate, claim_case, find_witness

log = logging.getLogger("spextree.constructors")


def _require_feasible(m: int, l: int, delta: int):
    if not family_feasible(m, l, delta):
        raise InfeasibleFamily(f"no tree has m={m}, l={l}, delta={delta}")


def canonical_member(m: int, l: int, delta: int) -> LabeledTree:
    """Every A-vertex gets delta-1 private leaves, a hub joins them all, and
    the surplus leaves hang off vertex 0.

    Labels: A is ``0..l``, the hub is ``l+1``, leaves follow.
    """
    _require_feasible(m, l, delta)
    hub = l + 1
    edges = [(v, hub) for v in range(l + 1)] if l > 0 else []
    nxt = l + 2 if l > 0 else 1
    for v in range(l + 1):
        # for l = 0 the hub is just one of the leaves
        private = delta - 1 if l > 0 else delta
        for _ in range(private):
            edges.append((v, nxt))
            nxt += 1
    while nxt < m:
        edges.append((0, nxt))
        nxt += 1
    return make_tree(edges, m)


def chain_member(m: int, delta: int) -> LabeledTree:
    """An l = 2 member with a singleton witness for any excess.

    A = {x, y, z} = {0, 1, 2}; x-3-y and x-4-z; x and y are padded to degree
    delta, z carries every surplus leaf.
    """
    _require_feasible(m, 2, delta)
    if delta < 2:
        raise DeltaIsOne("the chain member needs delta >= 2")
    t = m - 1 - 3 * delta
    edges = [(0, 3), (1, 3), (0, 4), (2, 4)]
    nxt = 5
    for v, count in ((0, delta - 2), (1, delta - 1), (2, delta - 1 + t)):
        for _ in range(count):
            edges.append((v, nxt))
            nxt += 1
    return make_tree(edges, m)


# ---------------------------------------------------------------------------
# Caterpillars and lobsters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CaterpillarSpec:
    """``C_k(d_1, ..., d_k)``: a k-vertex spine, ``d_i`` leaves on spine vertex i."""

    k: int
    d: Tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise SpecInvalid("spine length must be at least 1")
        if len(self.d) != self.k:
            raise SpecInvalid(f"need {self.k} leaf counts, got {len(self.d)}")
        if any(x < 0 for x in self.d):
            raise SpecInvalid("leaf counts must be non-negative")


def alternating_caterpillar(k: int, d1: int, d2: int) -> CaterpillarSpec:
    """``C_k(d1, d2, d1, d2, ...)``."""
    return CaterpillarSpec(k, tuple(d1 if i % 2 == 0 else d2 for i in range(k)))


def caterpillar(spec: CaterpillarSpec) -> LabeledTree:
    edges = [(i, i + 1) for i in range(spec.k - 1)]
    nxt = spec.k
    for i, count in enumerate(spec.d):
        for _ in range(count):
            edges.append((i, nxt))
            nxt += 1
    return make_tree(edges, nxt)


def lobster_from_caterpillar(spec: CaterpillarSpec, d: int) -> LabeledTree:
    """Attach ``d`` pendant edges to every leaf of the caterpillar lying in
    its smaller partite set."""
    if d < 0:
        raise SpecInvalid("pendant count must be non-negative")
    cat = caterpillar(spec)
    own, other = bipartition(cat)
    small = own if len(own) <= len(other) or not other else other
    edges = list(cat.edges)
    nxt = cat.vertex_count
    for v in sorted(small):
        if cat.degree(v) <= 1:
            for _ in range(d):
                edges.append((v, nxt))
                nxt += 1
    return make_tree(edges, nxt)


@dataclass(frozen=True)
class LobsterParameters:
    l: int
    delta: int
    t: int


def lobster_parameters(k: int, d1: int, d2: int, d: int) -> LobsterParameters:
    """Predicted profile of the lobster built from ``C_k(d1, d2, ...)``."""
    if k < 2:
        raise SpecInvalid("the closed forms need a spine of length at least 2")
    if k % 2 == 0:
        if not 1 <= d <= d2 <= d1 < d2 + d:
            raise SpecInvalid("even spines need 1 <= d <= d2 <= d1 < d2 + d")
        half = k // 2
        return LobsterParameters(half * (d2 + 1) - 1, d + 1, half * (d1 - d + 1) - 1)
    up = ceil(k / 2)
    if not (1 <= d <= d2 <= d1 <= d2 + d and d2 <= up):
        raise SpecInvalid("odd spines need 1 <= d <= d2 <= d1 <= d2 + d and d2 <= ceil(k/2)")
    return LobsterParameters(up + (k // 2) * d2 - 1, d + 1, up * (d1 - d + 1) - 2)


# ---------------------------------------------------------------------------
# Combination
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Combination:
    tree: LabeledTree
    certificate: HypothesisCertificate
    case: str
    attach: int


def combine(first: LabeledTree, second: LabeledTree) -> Combination:
    """Glue ``second`` onto ``first`` with one edge so the result keeps delta,
    has ``l = l1 + l2 + 1`` and still admits a witness."""
    p1, p2 = profile(first), profile(second)
    if p1.delta != p2.delta:
        raise DeltaMismatch(f"delta {p1.delta} and {p2.delta} differ")
    if p1.delta == 1:
        raise DeltaIsOne("trees with delta = 1 cannot be combined")
    d1 = decompose(first, p1)
    cert = find_witness(first, p1, d1)
    if not cert.valid:
        raise HypothesisMissing(f"first tree has no witness: {cert.reason}")
    case = claim_case(first, p1, d1)
    if case is None:
        raise HypothesisMissing("first tree offers no attachment vertex")

    offset = first.vertex_count
    target = min(p2.A) + offset
    edges = list(first.edges) + [(u + offset, v + offset) for u, v in second.edges]
    edges.append((case.attach, target))
    tree = make_tree(edges, first.vertex_count + second.vertex_count)

    p = profile(tree)
    if (p.m, p.l, p.delta) != (p1.m + p2.m, p1.l + p2.l + 1, p1.delta):
        raise InternalVerificationFailed(f"combined profile is off: {(p.m, p.l, p.delta)}")
    fresh = find_witness(tree, p)
    if not fresh.valid:
        raise InternalVerificationFailed("combined tree lost its witness")
    log.debug("combined via %s at vertex %d", case.kind, case.attach)
    return Combination(tree, fresh, case.kind, case.attach)


def embeddable_member(m: int, l: int, delta: int) -> LabeledTree:
    """A member of the family that embeds into ``K_l-bar v m S_delta``."""
    _require_feasible(m, l, delta)
    if l == 0 or delta == 1:
        raise UnsupportedParameters(
            f"no tree with l={l}, delta={delta} embeds into the star host", l=l, delta=delta
        )
    t = m - 1 - (l + 1) * delta
    if t < l:
        return canonical_member(m, l, delta)
    if l == 1:
        raise UnsupportedParameters(
            "every l = 1 tree with positive excess is a double star that does not embed",
            l=l, delta=delta,
        )
    if l == 2:
        return chain_member(m, delta)
    m1 = 2 * delta + 1
    first = canonical_member(m1, 1, delta)
    second = canonical_member(m - m1, l - 2, delta)
    return combine(first, second).tree


# ---------------------------------------------------------------------------
# Random members with small excess
# ---------------------------------------------------------------------------

def random_small_excess_member(m: int, l: int, delta: int, seed: Optional[int] = None) -> LabeledTree:
    """A random tree with ``t < l``.

    A = ``0..l``. A core part B' of size b joins A into a tree where each
    B'-vertex has at least two A-neighbours; the rest of B are private leaves
    that lift every A-vertex to degree delta or more, keeping one vertex at
    exactly delta.
    """
    _require_feasible(m, l, delta)
    t = m - 1 - (l + 1) * delta
    if l < 1 or delta < 2 or t >= l:
        raise InfeasibleFamily(f"m={m}, l={l}, delta={delta} has t={t}, need 1 <= l, t < l, delta >= 2")
    rng = np.random.default_rng(seed)

    b = int(rng.integers(1, l + 1))
    # split l into b positive parts: B'-vertex j has parts[j] + 1 A-neighbours
    cuts = sorted(rng.choice(np.arange(1, l), size=b - 1, replace=False).tolist()) if b > 1 else []
    bounds = [0] + cuts + [l]
    parts = [bounds[i + 1] - bounds[i] for i in range(b)]

    order = rng.permutation(l + 1).tolist()
    edges: List[Tuple[int, int]] = []
    core_deg = [0] * (l + 1)
    attached = [order[0]]
    pos = 1
    for j, size in enumerate(parts):
        w = l + 1 + j
        # anchors stay at core degree <= delta so the leaf budget is exactly t
        open_anchors = [v for v in attached if core_deg[v] < delta]
        anchor = open_anchors[int(rng.integers(0, len(open_anchors)))]
        group = [anchor] + order[pos:pos + size]
        pos += size
        attached.extend(order[pos - size:pos])
        for v in group:
            edges.append((v, w))
            core_deg[v] += 1

    need = [max(delta - core_deg[v], 0) for v in range(l + 1)]
    spare = m - (l + 1) - b - sum(need)
    # one vertex stays at exactly delta
    exact = [v for v in range(l + 1) if core_deg[v] <= delta]
    keep = exact[int(rng.integers(0, len(exact)))]
    others = [v for v in range(l + 1) if v != keep]
    for _ in range(spare):
        need[others[int(rng.integers(0, len(others)))]] += 1

    nxt = l + 1 + b
    for v in range(l + 1):
        for _ in range(need[v]):
            edges.append((v, nxt))
            nxt += 1
    tree = make_tree(edges, m)
    p = profile(tree)
    if (p.l, p.delta) != (l, delta):
        raise InternalVerificationFailed(f"generated profile {(p.m, p.l, p.delta)} is off")
    return tree
