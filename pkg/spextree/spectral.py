"""Spectral radii, the closed form f(l, x, n) and the bound checkers built on it.

``f(l, x, n)`` is the spectral radius of ``K_l v H`` for an x-regular ``H`` on
``n - l`` vertices: the largest root of

    p_x(y) = y^2 - (l + x - 1) y - (n l + x - l x - l^2)

which is also the largest eigenvalue of the quotient matrix
``[[l - 1, n - l], [l, x]]``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from scipy.special import gammaln

from .errors import DeltaTooSmall, DomainError, InvalidInputs, PreconditionFailed
from .graphs import degree_counts, join, max_degree
from .trees import TreeProfile

log = logging.getLogger("spextree.spectral")

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
CHECK_TOL = 1e-8


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def f_value(l: int, x: float, n: int) -> float:
    if l < 0 or x < 0:
        raise DomainError(f"f needs l >= 0 and x >= 0, got l={l}, x={x}")
    if n <= l:
        raise DomainError(f"f needs n > l, got n={n}, l={l}")
    s = l + x - 1
    disc = s * s + 4 * (n * l + x - l * x - l * l)
    return (s + math.sqrt(disc)) / 2


def quotient_matrix(l: int, d: float, n: int) -> np.ndarray:
    return np.array([[l - 1, n - l], [l, d]], dtype=float)


def char_poly(l: int, x: float, n: int, value: float) -> float:
    """``p_x(value)``; zero at ``f_value(l, x, n)``."""
    return value * value - (l + x - 1) * value - (n * l + x - l * x - l * l)


def gap(l: int, delta: int, n: int) -> float:
    """Width of the plain spex window, ``f(delta-1) - f(delta-2)``."""
    if delta < 2:
        raise DomainError("gap needs delta >= 2")
    return f_value(l, delta - 1, n) - f_value(l, delta - 2, n)


def gap_deviation_bound(l: int, delta: int, n: int) -> float:
    """Upper bound on ``|gap - 1/2|``."""
    return (abs(2 * delta - 2 * l - 1) + 1) / (2 * math.sqrt(l * n))


def spectral_window(n: int, m: int, l: int) -> Tuple[float, float]:
    """A-priori bracket ``[sqrt(l(n-l)), sqrt((2m-4)n)]`` for a spex graph."""
    if n <= l:
        raise DomainError(f"need n > l, got n={n}, l={l}")
    return math.sqrt(l * (n - l)), math.sqrt(max(2 * m - 4, 0) * n)


def degree_count_bound(k: int, d: int) -> int:
    """Most vertices of degree ``d`` a ``k S_{d+1}``-free graph of maximum degree ``d`` has."""
    return (k - 1) * (d * d + 1)


# ---------------------------------------------------------------------------
# Power iteration
# ---------------------------------------------------------------------------

@dataclass
class SpectralResult:
    """Spectral radius and a Perron vector scaled to max entry 1."""

    lam: float
    perron: Dict[int, float]
    converged: bool = True
    iterations: int = 0

    def vector(self, nodes: Sequence[int]) -> np.ndarray:
        return np.array([self.perron[v] for v in nodes])


def _component_radius(adj: np.ndarray, tol: float, max_iter: int) -> Tuple[float, np.ndarray, bool, int]:
    size = adj.shape[0]
    if size == 1:
        return 0.0, np.ones(1), True, 0
    shifted = adj + np.eye(size)
    x = np.ones(size) / math.sqrt(size)
    lam = float(x @ adj @ x)
    for it in range(1, max_iter + 1):
        y = shifted @ x
        x = y / np.linalg.norm(y)
        ax = adj @ x
        lam = float(x @ ax)
        # residual, not the Rayleigh step: the Perron vector must be accurate too
        if np.linalg.norm(ax - lam * x) < tol:
            return lam, x, True, it
    return lam, x, False, max_iter


def spectral_radius(g: nx.Graph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Shifted power iteration on every component; the largest wins.

    Entries outside the winning component are zero.
    """
    if g.number_of_nodes() == 0:
        raise DomainError("spectral radius of the empty graph")
    perron = {v: 0.0 for v in g.nodes}
    best: Optional[Tuple[float, List[int], np.ndarray]] = None
    converged = True
    sweeps = 0
    for comp in sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0]):
        adj = nx.to_numpy_array(g, nodelist=comp)
        lam, vec, ok, it = _component_radius(adj, tol, max_iter)
        converged &= ok
        sweeps = max(sweeps, it)
        if best is None or lam > best[0] + tol:
            best = (lam, comp, vec)
    lam, comp, vec = best
    vec = np.abs(vec)
    vec = vec / vec.max()
    for v, val in zip(comp, vec):
        perron[v] = float(val)
    if not converged:
        log.warning("power iteration stopped after %d sweeps without reaching tol=%g", max_iter, tol)
    return SpectralResult(lam, perron, converged, sweeps)


def rayleigh_lower_cert(g: nx.Graph, y: Union[Mapping[int, float], Sequence[float]], c: float) -> bool:
    """True iff ``A y >= c y`` entry-wise, which certifies ``lambda(G) >= c``.

    A sequence ``y`` is read in sorted node order.
    """
    nodes = sorted(g.nodes)
    vec = np.array([y[v] for v in nodes] if isinstance(y, Mapping) else list(y), dtype=float)
    if vec.shape[0] != len(nodes) or (vec < 0).any() or not vec.any():
        return False
    adj = nx.to_numpy_array(g, nodelist=nodes)
    return bool(np.all(adj @ vec >= c * vec))


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpexBounds:
    lower: float
    upper: float
    regime: str
    l: int
    delta: int
    n: int
    c: Optional[int] = None

    def as_report(self) -> dict:
        out = {
            "lower": self.lower,
            "upper": self.upper,
            "regime": self.regime,
            "c": self.c,
            "f_params": {"l": self.l, "delta": self.delta, "n": self.n},
        }
        if self.delta >= 2 and self.l >= 1:
            out["gap"] = gap(self.l, self.delta, self.n)
        return out


def spex_bounds(P: TreeProfile, n: int, embeddable: bool = False, c: Optional[int] = None) -> SpexBounds:
    """The window for ``spex(n, T)``.

    Plain: ``[f(delta-2), f(delta-1)]``. Embeddable: the upper end drops to
    ``f(delta-2) + 2c/n``. With delta = 1 the plain window starts at
    ``lambda(K_{l,n-l})`` instead.
    """
    if n <= P.l:
        raise DomainError(f"need n > l, got n={n}, l={P.l}")
    if embeddable:
        if P.delta < 2:
            raise DeltaTooSmall("the embeddable window needs delta >= 2")
        if c is None:
            c = (P.m - 1) * ((P.delta - 1) ** 2 + 1)
        lower = f_value(P.l, P.delta - 2, n)
        return SpexBounds(lower, lower + 2 * c / n, "embeddable", P.l, P.delta, n, c)
    if P.delta < 2:
        lower = math.sqrt(P.l * (n - P.l))
    else:
        lower = f_value(P.l, P.delta - 2, n)
    return SpexBounds(lower, f_value(P.l, P.delta - 1, n), "plain", P.l, P.delta, n, c)


def join_upper_bound(h1: nx.Graph, h2: nx.Graph) -> float:
    """Largest eigenvalue of ``[[D1, n2], [n1, D2]]``, an upper bound for ``lambda(H1 v H2)``."""
    a, d = max_degree(h1), max_degree(h2)
    b, c = h2.number_of_nodes(), h1.number_of_nodes()
    return (a + d + math.sqrt((a - d) ** 2 + 4 * b * c)) / 2


@dataclass
class InequalityCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -CHECK_TOL

    def as_report(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack, "holds": self.holds}


@dataclass
class CheckReport:
    lam: float
    checks: List[InequalityCheck] = field(default_factory=list)
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks)

    def as_report(self) -> dict:
        out = {"lambda": self.lam, "passed": self.passed, "checks": [c.as_report() for c in self.checks]}
        out.update(self.details)
        return out


def perron_bounds_check(h1: nx.Graph, h2: nx.Graph, result: Optional[SpectralResult] = None) -> CheckReport:
    """Check the Perron-entry inequalities on ``H1 v H2``.

    ``M`` and ``m`` are the largest and smallest Perron entries over part two
    and ``d = Delta(H2)``:

    * ``M <= l / (lambda - d)``
    * ``M <= l / (sqrt(l (n - l)) - d)``  (weaker, needs the denominator positive)
    * ``M - m <= d M / lambda``
    """
    host = join(h1, h2)
    l = h1.number_of_nodes()
    n = host.number_of_nodes()
    if result is None:
        result = spectral_radius(host)
    lam = result.lam
    part2 = range(l, n)
    entries = [result.perron[v] for v in part2]
    big, small = max(entries), min(entries)
    d = max_degree(h2)

    report = CheckReport(lam, details={"M": big, "m": small, "d": d})
    if lam > d:
        report.checks.append(InequalityCheck("max_entry", big, l / (lam - d)))
    floor = math.sqrt(l * (n - l))
    if floor > d:
        report.checks.append(InequalityCheck("max_entry_weak", big, l / (floor - d)))
    report.checks.append(InequalityCheck("entry_spread", big - small, d * big / lam if lam else 0.0))
    return report


def refined_upper_check(l: int, h2: nx.Graph, c: Optional[int] = None, d: Optional[int] = None) -> CheckReport:
    """``lambda(K_l v H2) <= f(l, d-1, n) + 2c/n`` when at most ``c`` vertices
    of ``H2`` reach degree ``d`` and none exceed it."""
    top = max_degree(h2)
    if d is None:
        d = top
    if d < 1:
        raise PreconditionFailed("the refined bound needs d >= 1")
    if top > d:
        raise PreconditionFailed(f"H2 has maximum degree {top} > d = {d}")
    at_d = degree_counts(h2, d)
    if c is None:
        c = at_d
    if at_d > c:
        raise PreconditionFailed(f"H2 has {at_d} vertices of degree {d}, more than c = {c}")
    host = join(nx.complete_graph(l), h2)
    n = host.number_of_nodes()
    lam = spectral_radius(host).lam
    base = f_value(l, d - 1, n)
    report = CheckReport(lam, [InequalityCheck("refined_upper", lam, base + 2 * c / n)], {"c": c, "d": d, "n": n})
    if lam > d:
        # the Perron-entry form; it implies the 2c/n form once denominator >= n
        denominator = (lam - d) ** 2 / l + (n - l) * ((lam - d) / lam) ** 2
        report.checks.append(InequalityCheck("refined_upper_perron", lam, base + 2 * c / denominator))
        report.details["denominator"] = denominator
    return report


# ---------------------------------------------------------------------------
# Constants and the size threshold
# ---------------------------------------------------------------------------

LOG10_FLOAT_LIMIT = 300.0


@dataclass
class ThresholdReport:
    valid: bool
    violations: List[str]
    boundary: List[str]
    log10_terms: List[float]
    overflow: bool

    @property
    def terms(self) -> List[Optional[float]]:
        return [10 ** x if x < LOG10_FLOAT_LIMIT else None for x in self.log10_terms]

    @property
    def log10_N(self) -> float:
        return max(self.log10_terms)

    @property
    def N(self) -> Optional[float]:
        return None if self.overflow else 10 ** self.log10_N

    def as_report(self) -> dict:
        return {
            "valid": self.valid,
            "violations": self.violations,
            "boundary": self.boundary,
            "terms": self.terms,
            "log10_terms": self.log10_terms,
            "N": self.N,
            "log10_N": self.log10_N,
            "overflow": self.overflow,
        }


def _log10_binom(x: float, k: int) -> float:
    """log10 C(x, k) for real x >= k; summed term by term so huge x stays exact."""
    return float(np.sum(np.log10(x - np.arange(k))) - gammaln(k + 1) / math.log(10))


def _compare(name: str, value: float, bound: float, violations: List[str], boundary: List[str]):
    if math.isclose(value, bound, rel_tol=1e-12):
        boundary.append(name)
    elif value > bound:
        violations.append(name)


def constants_and_threshold(m: int, l: int, eta: float, epsilon: float, alpha: float) -> ThresholdReport:
    """Validate the constant choice and evaluate the five threshold terms.

    A constant that meets its bound with equality (up to rounding) is listed
    under ``boundary`` and does not make the choice invalid.
    """
    if l < 1 or m < 2 * l + 2:
        raise InvalidInputs(f"need l >= 1 and m >= 2l + 2, got m={m}, l={l}")
    if min(eta, epsilon, alpha) <= 0:
        raise InvalidInputs("eta, epsilon and alpha must be positive")

    violations: List[str] = []
    boundary: List[str] = []
    eta_cap = min(1 / (2 * l), (1 / 5 - 1 / (16 * l * m) + 1 / (20 * l * l * m)) / (m - l - 1))
    eps_cap = min(1 / (16 * l * l * m), eta / 2, eta / (32 * l * l * m + 2))
    alpha_cap = min(eta, epsilon ** 2 / (10 * m))
    _compare("eta", eta, eta_cap, violations, boundary)
    _compare("epsilon", epsilon, eps_cap, violations, boundary)
    _compare("alpha", alpha, alpha_cap, violations, boundary)

    lg = math.log10
    terms = [
        lg(200) + 6 * lg(m) - 4 * lg(alpha),
        lg(2500) + 3 * lg(m) + 2 * lg(l) - 3 * lg(alpha),
        2 * lg(l) - 2 * lg(epsilon),
        lg(50) + 3 * lg(m) + lg(l) - lg(epsilon) - lg(alpha) + _log10_binom(50 * m * m * l / alpha, l),
        lg(200) + 2 * lg(m) + lg(l) - lg(alpha) - lg(epsilon),
    ]
    overflow = max(terms) >= LOG10_FLOAT_LIMIT
    if overflow:
        log.info("threshold for m=%d, l=%d overflows doubles; reporting log10 only", m, l)
    return ThresholdReport(not violations, violations, boundary, terms, overflow)


def explicit_constants(m: int) -> Tuple[float, float, float]:
    """``eta = 1/(6m)``, ``epsilon = 1/(200 m^4)``, ``alpha = 1/(400000 m^9)``."""
    return 1 / (6 * m), 1 / (200 * m ** 4), 1 / (400000 * m ** 9)


def explicit_threshold_bound(m: int, l: int) -> float:
    """log10 of the closed-form estimate of the threshold under the explicit constants."""
    lg = math.log10
    return max(
        25 + 42 * lg(m),
        21 + 32 * lg(m),
        5 + 10 * lg(m),
        lg(4) + 9 + 17 * lg(m) + l * (lg(2) + 7 + 12 * lg(m)),
        11 + 16 * lg(m),
    )
