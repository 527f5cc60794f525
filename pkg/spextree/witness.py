"""Hypothesis witnesses: checking, searching and refining subsets of J'.

A subset ``I`` of ``J'`` is a witness when ``T^I`` is a tree and

    sum(a_i) >= 2 + sum(t_i - 1)            over v_i in I

and, for ``|I| > 1``, additionally ``a_i <= t_i`` for every ``v_i`` in ``I``
and the neighbourhood of the middle vertices of ``T^I`` is exactly ``I``.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Tuple

from .decomposition import Decomposition, InducedForest, decompose, induced_forest, rooted_subtree
from .errors import (
    EmptyWitness,
    InternalVerificationFailed,
    InvalidWitness,
    NotSubsetOfJprime,
    SearchCapExceeded,
)
from .trees import LabeledTree, TreeProfile, profile

log = logging.getLogger("spextree.witness")

WITNESS_SEARCH_CAP = 20


@dataclass(frozen=True)
class HypothesisCertificate:
    witness: Tuple[int, ...]
    lhs: int
    rhs: int
    tree_check: bool
    per_vertex: Tuple[Tuple[int, int, int], ...]  # (v, a_v, t_v)
    bounded_ok: Optional[bool] = None  # a_i <= t_i, only checked when |I| > 1
    neighborhood_ok: Optional[bool] = None
    reason: str = ""
    refined: Optional[Tuple[int, ...]] = field(default=None, compare=False)

    @property
    def valid(self) -> bool:
        if not self.tree_check or self.lhs < self.rhs:
            return False
        if len(self.witness) > 1:
            return bool(self.bounded_ok and self.neighborhood_ok)
        return True

    def with_refined(self, refined: Iterable[int]) -> "HypothesisCertificate":
        return HypothesisCertificate(
            self.witness, self.lhs, self.rhs, self.tree_check, self.per_vertex,
            self.bounded_ok, self.neighborhood_ok, self.reason, tuple(sorted(refined)),
        )

    def as_report(self) -> dict:
        return {
            "witness": list(self.witness),
            "valid": self.valid,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "tree_check": self.tree_check,
            "bounded_ok": self.bounded_ok,
            "neighborhood_ok": self.neighborhood_ok,
            "per_vertex": [{"v": v, "a": a, "t": t} for v, a, t in self.per_vertex],
            "refined": list(self.refined) if self.refined is not None else None,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class NoWitness:
    reason: str
    subsets_checked: int = 0

    valid = False

    def as_report(self) -> dict:
        return {"witness": None, "valid": False, "reason": self.reason, "subsets_checked": self.subsets_checked}


def check_with(
    tree: LabeledTree,
    P: TreeProfile,
    D: Decomposition,
    I: Iterable[int],
) -> HypothesisCertificate:
    """Evaluate every witness condition for ``I`` and say which one fails."""
    I = frozenset(I)
    if not I:
        raise EmptyWitness("a witness needs at least one vertex")
    stray = sorted(I - D.Jprime)
    if stray:
        raise NotSubsetOfJprime(f"vertices {stray} are not in J'")

    F = induced_forest(tree, I, P)
    per_vertex = tuple((v, D.a(v), P.excess[v]) for v in sorted(I))
    lhs = sum(a for _, a, _ in per_vertex)
    rhs = 2 + sum(t - 1 for _, _, t in per_vertex)
    tree_check = F.is_tree()

    bounded_ok = neighborhood_ok = None
    if len(I) > 1:
        bounded_ok = all(a <= t for _, a, t in per_vertex)
        middles = F.vertices - I
        reach = {x for w in middles for x in tree.neighbors(w)}
        neighborhood_ok = reach == set(I)

    reasons = []
    if not tree_check:
        reasons.append("T^I is not connected")
    if lhs < rhs:
        reasons.append(f"sum of a is {lhs}, needs at least {rhs}")
    if bounded_ok is False:
        reasons.append("some a_i exceeds t_i")
    if neighborhood_ok is False:
        reasons.append("middle vertices reach outside I")
    return HypothesisCertificate(
        tuple(sorted(I)), lhs, rhs, tree_check, per_vertex,
        bounded_ok, neighborhood_ok, "; ".join(reasons),
    )


def candidate_witnesses(P: TreeProfile, D: Decomposition) -> Iterator[Tuple[int, ...]]:
    """Subsets of J' in search order: singletons, J' itself, then by size."""
    jp = sorted(D.Jprime)
    for v in jp:
        yield (v,)
    if len(jp) > 1:
        yield tuple(jp)
    if len(jp) > WITNESS_SEARCH_CAP:
        raise SearchCapExceeded(f"|J'| = {len(jp)} exceeds the search cap of {WITNESS_SEARCH_CAP}")
    for size in range(2, len(jp)):
        yield from combinations(jp, size)


def find_witness(
    tree: LabeledTree,
    P: Optional[TreeProfile] = None,
    D: Optional[Decomposition] = None,
):
    """Return a valid :class:`HypothesisCertificate` or a :class:`NoWitness`."""
    if P is None:
        P = profile(tree)
    if D is None:
        D = decompose(tree, P)
    if not D.Jprime:
        return NoWitness("J' is empty")

    # Singletons with a_v > t_v are always witnesses.
    for v in sorted(D.Jprime):
        if D.a(v) > P.excess[v]:
            return check_with(tree, P, D, [v])

    checked = 0
    for subset in candidate_witnesses(P, D):
        if len(subset) == 1:
            continue
        checked += 1
        cert = check_with(tree, P, D, subset)
        if cert.valid:
            log.debug("witness %s found after %d subsets", subset, checked)
            return cert
    return NoWitness("no subset of J' satisfies the hypothesis", checked)


def all_witnesses(tree: LabeledTree, P: TreeProfile, D: Decomposition) -> Iterator[HypothesisCertificate]:
    """Every valid witness, in search order."""
    for subset in candidate_witnesses(P, D):
        cert = check_with(tree, P, D, subset)
        if cert.valid:
            yield cert


def _violators(P: TreeProfile, D: Decomposition, F: InducedForest, current) -> List[int]:
    return [v for v in sorted(current) if D.a(v) > P.excess[v] + 1 - F.degree(v)]


def refine(
    tree: LabeledTree,
    P: TreeProfile,
    D: Decomposition,
    I: Iterable[int],
) -> frozenset:
    """Shrink a multi-vertex witness until ``a_i <= t_i + 1 - deg_{T^I'}(v_i)`` everywhere.

    The result still satisfies the witness conditions.
    """
    I = frozenset(I)
    start = check_with(tree, P, D, I)
    if not start.valid or len(I) < 2:
        raise InvalidWitness(f"refine needs a valid witness with |I| > 1: {start.reason or 'singleton'}")

    current = set(I)
    root = min(current)
    for iteration in range(len(I) + 2):
        # Step 0
        F = induced_forest(tree, current, P)
        bad = _violators(P, D, F, current)
        if not bad:
            log.debug("refine finished after %d iterations with %s", iteration, sorted(current))
            return frozenset(current)
        depth = F.depths(root)
        u = min(bad, key=lambda v: (-depth[v], v))

        # Step 1: drop child branches that cost more than they give
        for w in F.children(root, u):
            branch = rooted_subtree(F, root, w).vertices & current
            if sum(D.a(x) for x in branch) <= sum(P.excess[x] - 1 for x in branch):
                current -= branch
        F = induced_forest(tree, current, P)
        if D.a(u) <= P.excess[u] + 1 - F.degree(u):
            continue

        # Step 2: restrict to the subtree at u and keep its lowest children
        below = rooted_subtree(F, root, u)
        current &= below.vertices
        root = u
        F = induced_forest(tree, current, P)
        keep = max(P.excess[u] + 1 - D.a(u), 0)
        for w in F.children(root, u)[keep:]:
            current -= rooted_subtree(F, root, w).vertices
    raise InternalVerificationFailed(f"refine did not terminate on witness {sorted(I)}")


@dataclass(frozen=True)
class ClaimCase:
    """How two trees are glued: ``attach`` is the vertex of the first tree that
    receives the new edge; ``kind`` names the situation that chose it."""

    kind: str
    anchor: int
    attach: int


def claim_case(tree: LabeledTree, P: TreeProfile, D: Decomposition) -> Optional[ClaimCase]:
    jp = sorted(D.Jprime)

    # a J' vertex with a pendant leaf
    for u in jp:
        leaves = [w for w in tree.neighbors(u) if tree.degree(w) == 1]
        if leaves:
            return ClaimCase("leaf_neighbor", u, leaves[0])

    # two leaves of T^{J'} with a > t
    if len(jp) > 1:
        F = induced_forest(tree, jp, P)
        tips = [u for u in jp if F.degree(u) == 1 and D.a(u) > P.excess[u]]
        if len(tips) >= 2:
            u = tips[0]
            outside = [w for w in tree.neighbors(u) if w not in F.vertices]
            if outside:
                return ClaimCase("two_leaves", u, outside[0])

    # a single J' vertex with room to spare
    if len(jp) == 1:
        u = jp[0]
        if D.a(u) - 1 > P.excess[u]:
            return ClaimCase("singleton", u, tree.neighbors(u)[0])
    return None
