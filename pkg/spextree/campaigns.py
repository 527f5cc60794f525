"""Sweep campaigns: each one checks a family of claims over a parameter grid.

Every campaign takes ``(cfg, log, rng)`` and returns a summary dict built
only from deterministic quantities, so identical configs give identical
reports. Failures are counted in the summary and recorded on the log.
"""

import math
from typing import Callable, Dict, Optional

import networkx as nx
import numpy as np

from .config import CAMPAIGN_NAMES, SweepConfig
from .constructors import embeddable_member
from .decomposition import decompose
from .embedder import embed_highdeg_join, embed_star_host, join_host
from .errors import BudgetExceeded, DomainError, SpexTreeError, UnsupportedParameters
from .extremal import brute_force_spex, build_candidate, certify_T_free, enumerate_graphs, has_disjoint_stars, trees_up_to
from .graphs import degree_counts, join, regular_or_almost
from .logging_util import CampaignLog
from .spectral import (
    constants_and_threshold,
    degree_count_bound,
    explicit_constants,
    explicit_threshold_bound,
    f_value,
    gap,
    gap_deviation_bound,
    perron_bounds_check,
    refined_upper_check,
    spectral_radius,
    spectral_window,
)
from .trees import LabeledTree, family_feasible, make_tree, profile, random_tree
from .witness import find_witness

# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

LAMBDA_TOL = 1e-9
F_TOL = 1e-8
DEFAULT_SAMPLES = 1000
# brute-force spex grid: default reach, and the largest one the oracle accepts
BRUTE_FORCE_DEFAULT = (5, 7)
BRUTE_FORCE_FULL = (7, 8)


def _tree_id(tree: LabeledTree) -> str:
    return nx.to_graph6_bytes(tree.to_networkx(), header=False).decode().strip()


def _seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 31 - 1))


def _bounded_degree_graph(size: int, d: int, rng: np.random.Generator) -> nx.Graph:
    """Random graph on ``size`` vertices with maximum degree at most ``d``."""
    g = nx.empty_graph(size)
    if size < 2 or d == 0:
        return g
    p = float(rng.uniform(0.2, 1.0))
    pairs = [(u, v) for u in range(size) for v in range(u + 1, size)]
    for idx in rng.permutation(len(pairs)):
        u, v = pairs[idx]
        if g.degree(u) < d and g.degree(v) < d and rng.random() < p:
            g.add_edge(u, v)
    return g


def _trees(m_min: int, m_max: int):
    return [t for t in trees_up_to(m_max) if t.vertex_count >= m_min]


# ---------------------------------------------------------------------------
# Embedding campaigns
# ---------------------------------------------------------------------------

def embedding_completeness(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """Every tree with ``t < l`` gets a witness and a verified star-host embedding."""
    trees = list(trees_up_to(cfg.m_max or 12))
    small = embedded = 0
    methods: Dict[str, int] = {}
    failures = 0
    for i, tree in enumerate(trees, 1):
        P = profile(tree) if tree.vertex_count >= 2 else None
        if P is None or not P.in_small_excess_family:
            log.progress(i, len(trees))
            continue
        small += 1
        cell = f"tree {_tree_id(tree)}"
        try:
            D = decompose(tree, P)
            cert = find_witness(tree, P, D)
            if not cert.valid:
                raise DomainError(f"no witness: {cert.reason}")
            emb = embed_star_host(tree, P, D, cert, cfg.budget)
            embedded += 1
            methods[emb.method] = methods.get(emb.method, 0) + 1
            log.record(cell, True)
        except SpexTreeError as e:
            failures += 1
            log.record(cell, False, f"{e.code}: {e.message}")
        log.progress(i, len(trees))
    return {"trees": len(trees), "t_lt_l": small, "embedded": embedded, "failures": failures, "methods": methods}


def nonembedding_soundness(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """Lower candidates ``K_l v H`` are T-free by exhaustive search."""
    n_max = max(cfg.n_values) if cfg.n_values else 14
    cells = []
    for tree in _trees(2, cfg.m_max or 9):
        P = profile(tree)
        if P.delta < 2:
            continue
        ns = cfg.n_values or range(tree.vertex_count, n_max + 1)
        cells.extend((tree, P, n) for n in ns if n > P.l)
    checked = t_free = counterexamples = skipped = 0
    for i, (tree, P, n) in enumerate(cells, 1):
        cell = f"tree {_tree_id(tree)} n={n}"
        try:
            cand = build_candidate(P, n, "lower")
        except DomainError as e:
            skipped += 1
            log.skip(cell, e.message)
            log.progress(i, len(cells))
            continue
        checked += 1
        try:
            verdict = certify_T_free(cand.graph, tree, cfg.budget)
        except BudgetExceeded:
            log.skip(cell, "search budget exhausted")
            skipped += 1
            checked -= 1
        else:
            if verdict.t_free:
                t_free += 1
                log.record(cell, True)
            else:
                counterexamples += 1
                log.record(cell, False, f"embedding found: {verdict.witness}")
        log.progress(i, len(cells))
    return {"cells": checked, "t_free": t_free, "counterexamples": counterexamples, "skipped": skipped}


def threshold_embedding(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """Random join hosts whose part two reaches degree delta always take the tree."""
    samples = DEFAULT_SAMPLES if cfg.samples is None else cfg.samples
    m_top = min(cfg.m_max or 10, 10)
    n_top = max(cfg.n_values) if cfg.n_values else 20
    verified = failures = skipped = 0
    for i in range(1, samples + 1):
        m = int(rng.integers(2, m_top + 1))
        tree = random_tree(m, _seed(rng))
        P = profile(tree)
        low = max(m - P.l, P.delta + 1)
        high = n_top - P.l
        if low > high:
            skipped += 1
            log.skip(f"sample {i}", "no host size fits")
            continue
        n2 = int(rng.integers(low, high + 1))
        h1 = nx.gnp_random_graph(P.l, 0.5, seed=_seed(rng))
        h2 = nx.gnp_random_graph(n2, float(rng.uniform(0.0, 0.5)), seed=_seed(rng))
        h2.add_edges_from((0, j) for j in range(1, P.delta + 1))
        cell = f"sample {i} m={m} n={P.l + n2}"
        try:
            emb = embed_highdeg_join(tree, P, join_host(h1, h2))
            verified += emb.verified
            log.record(cell, emb.verified)
            failures += not emb.verified
        except SpexTreeError as e:
            failures += 1
            log.record(cell, False, f"{e.code}: {e.message}")
        log.progress(i, samples)
    return {"samples": samples, "verified": verified, "failures": failures, "skipped": skipped}


def construction_soundness(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """``embeddable_member`` hits the requested profile and embeds."""
    cells = [
        (m, l, delta)
        for m in range(2, (cfg.m_max or 20) + 1)
        for l in (cfg.l_values or range(1, 6))
        for delta in (cfg.delta_values or (2, 3, 4))
        if l >= 1 and delta > 1 and family_feasible(m, l, delta)
    ]
    verified = unsupported = failures = 0
    methods: Dict[str, int] = {}
    for i, (m, l, delta) in enumerate(cells, 1):
        cell = f"m={m} l={l} delta={delta}"
        try:
            tree = embeddable_member(m, l, delta)
            P = profile(tree)
            if (P.m, P.l, P.delta) != (m, l, delta):
                raise DomainError(f"built profile {(P.m, P.l, P.delta)}")
            D = decompose(tree, P)
            cert = find_witness(tree, P, D)
            emb = embed_star_host(tree, P, D, cert, cfg.budget)
            verified += 1
            methods[emb.method] = methods.get(emb.method, 0) + 1
            log.record(cell, True)
        except UnsupportedParameters as e:
            unsupported += 1
            log.skip(cell, e.message)
        except SpexTreeError as e:
            failures += 1
            log.record(cell, False, f"{e.code}: {e.message}")
        log.progress(i, len(cells))
    return {"cells": len(cells), "verified": verified, "unsupported": unsupported,
            "failures": failures, "methods": methods}


# ---------------------------------------------------------------------------
# Spectral campaigns
# ---------------------------------------------------------------------------

def f_consistency(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """Power iteration on ``K_l v (d-regular)`` agrees with the closed form."""
    cells = [
        (l, d, n)
        for l in (cfg.l_values or range(1, 5))
        for d in (cfg.d_values or range(0, 4))
        for n in (cfg.n_values or (20, 50, 100))
    ]
    checked = skipped = failures = 0
    worst = 0.0
    for i, (l, d, n) in enumerate(cells, 1):
        cell = f"l={l} d={d} n={n}"
        try:
            h, regular = regular_or_almost(n - l, d)
        except DomainError:
            regular, h = False, None
        if not regular:
            skipped += 1
            log.skip(cell, "no d-regular graph with this parity")
            log.progress(i, len(cells))
            continue
        checked += 1
        err = abs(spectral_radius(join(nx.complete_graph(l), h), tol=cfg.tol).lam - f_value(l, d, n))
        worst = max(worst, err)
        ok = err < F_TOL
        failures += not ok
        log.record(cell, ok, f"|lambda - f| = {err:.3e}")
        log.progress(i, len(cells))
    return {"cells": checked, "skipped": skipped, "max_abs_error": worst, "failures": failures}


def sandwich_lower(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """The certified lower candidate reaches ``f(l, delta-2, n)``."""
    cells = []
    for tree in _trees(2, cfg.m_max or 10):
        P = profile(tree)
        if P.delta >= 2:
            cells.extend((tree, P, n) for n in (cfg.n_values or (20, 50)) if n > P.l)
    checked = failures = skipped = 0
    worst = math.inf
    for i, (tree, P, n) in enumerate(cells, 1):
        cell = f"tree {_tree_id(tree)} n={n}"
        try:
            cand = build_candidate(P, n, "lower")
        except DomainError as e:
            skipped += 1
            log.skip(cell, e.message)
            log.progress(i, len(cells))
            continue
        checked += 1
        slack = spectral_radius(cand.graph, tol=cfg.tol).lam - f_value(P.l, P.delta - 2, n)
        worst = min(worst, slack)
        ok = slack >= -LAMBDA_TOL
        failures += not ok
        log.record(cell, ok, f"slack {slack:.3e}")
        log.progress(i, len(cells))
    return {"cells": checked, "skipped": skipped, "failures": failures,
            "min_slack": worst if checked else None}


def refined_upper(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """``lambda(K_l v H2)`` against ``f(l, d-1, n)`` plus the 2c term on random bounded-degree H2.

    A cell fails on the Perron-entry form; misses of the plain ``2c/n`` form
    are counted separately.
    """
    samples = DEFAULT_SAMPLES if cfg.samples is None else cfg.samples
    n_top = max(cfg.n_values) if cfg.n_values else 80
    failures = plain_misses = 0
    worst = worst_plain = math.inf
    for i in range(1, samples + 1):
        l = int(rng.integers(1, 4))
        d = int(rng.integers(1, 4))
        n = int(rng.integers(l + d + 2, max(n_top, l + d + 2) + 1))
        h2 = _bounded_degree_graph(n - l, d, rng)
        checks = {c.name: c for c in refined_upper_check(l, h2, d=d).checks}
        plain = checks["refined_upper"]
        judged = checks.get("refined_upper_perron", plain)
        worst = min(worst, judged.slack)
        worst_plain = min(worst_plain, plain.slack)
        plain_misses += not plain.holds
        ok = judged.slack >= -LAMBDA_TOL
        failures += not ok
        log.record(f"sample {i} l={l} d={d} n={n}", ok, f"slack {judged.slack:.3e}")
        log.progress(i, samples)
    return {"samples": samples, "failures": failures, "plain_misses": plain_misses,
            "min_slack": worst if samples else None, "min_plain_slack": worst_plain if samples else None}


def perron_entries(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """The Perron-entry inequalities hold on random ``K_l v H2``."""
    samples = DEFAULT_SAMPLES if cfg.samples is None else cfg.samples
    n_top = max(cfg.n_values) if cfg.n_values else 60
    failures = 0
    worst: Dict[str, float] = {}
    for i in range(1, samples + 1):
        l = int(rng.integers(1, 5))
        d = int(rng.integers(0, 4))
        n = int(rng.integers(l + 2, max(n_top, l + 2) + 1))
        h2 = _bounded_degree_graph(n - l, d, rng)
        report = perron_bounds_check(nx.complete_graph(l), h2)
        for check in report.checks:
            worst[check.name] = min(worst.get(check.name, math.inf), check.slack)
        failures += not report.passed
        log.record(f"sample {i} l={l} d={d} n={n}", report.passed)
        log.progress(i, samples)
    return {"samples": samples, "failures": failures, "min_slack": worst}


def degree_count(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """No ``kS_{d+1}``-free graph of maximum degree ``d`` beats ``(k-1)(d^2+1)``."""
    n_max = max(cfg.n_values) if cfg.n_values else 9
    ds = [d for d in (cfg.d_values or (1, 2)) if d in (1, 2)]
    pairs = [(k, d) for d in ds for k in (2, 3)]
    graphs_checked = violations = 0
    best: Dict[str, int] = {}
    for i, (k, d) in enumerate(pairs, 1):
        key = f"k={k},d={d}"
        bound = degree_count_bound(k, d)
        best[key] = 0
        for n in range(1, n_max + 1):
            for small in enumerate_graphs(n, max_degree=d):
                g = small.to_networkx()
                graphs_checked += 1
                if has_disjoint_stars(g, k, d, cfg.budget):
                    continue
                count = degree_counts(g, d)
                best[key] = max(best[key], count)
                if count > bound:
                    violations += 1
                    log.log_failure(f"{key} graph {small.graph6()}", f"{count} vertices of degree {d}")
        log.record(key, best[key] <= bound)
        log.progress(i, len(pairs))
    return {
        "graphs_checked": graphs_checked,
        "violations": violations,
        "max_free_counts": best,
        "bounds": {f"k={k},d={d}": degree_count_bound(k, d) for k, d in pairs},
    }


def gap_asymptotics(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """``|gap - 1/2|`` stays under its square-root bound."""
    cells = [
        (l, delta, n)
        for l in (cfg.l_values or range(1, 5))
        for delta in (cfg.delta_values or range(2, 6))
        for n in (cfg.n_values or (10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6))
        if n > l and delta >= 2
    ]
    failures = 0
    below_half = 0
    for i, (l, delta, n) in enumerate(cells, 1):
        deviation = gap(l, delta, n) - 0.5
        below_half += deviation < 0
        ok = abs(deviation) <= gap_deviation_bound(l, delta, n)
        failures += not ok
        log.record(f"l={l} delta={delta} n={n}", ok, f"deviation {deviation:.3e}")
        log.progress(i, len(cells))
    return {
        "cells": len(cells),
        "failures": failures,
        "below_half": below_half,
        "signed_deviation": {"l": 2, "delta": 2, "n": 100, "deviation": gap(2, 2, 100) - 0.5},
    }


def constants_threshold(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """The explicit constant choice is admissible and the closed-form estimate dominates N."""
    cells = [(m, l) for m in range(4, (cfg.m_max or 50) + 1) for l in range(1, m // 2)]
    valid = boundary = failures = 0
    top = -math.inf
    for i, (m, l) in enumerate(cells, 1):
        report = constants_and_threshold(m, l, *explicit_constants(m))
        dominated = report.log10_N <= explicit_threshold_bound(m, l) + 1e-9
        valid += report.valid
        boundary += bool(report.boundary)
        top = max(top, report.log10_N)
        ok = report.valid and dominated
        failures += not ok
        log.record(f"m={m} l={l}", ok, ", ".join(report.violations) or "estimate below N")
        log.progress(i, len(cells))
    return {"cells": len(cells), "valid": valid, "boundary_cells": boundary, "failures": failures,
            "max_log10_N": top if cells else None}


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------

GROUND_TRUTH = (
    ("P4", 5, 2.0),
    ("P4", 6, math.sqrt(5)),
    ("K13", 6, 2.0),
)

_NAMED_TREES = {
    "P4": make_tree([(0, 1), (1, 2), (2, 3)]),
    "K13": make_tree([(0, 1), (0, 2), (0, 3)]),
}


def brute_force_spex_campaign(cfg: SweepConfig, log: CampaignLog, rng: np.random.Generator) -> dict:
    """Exhaustive spex against known values, the lower candidate and the window."""
    truth = []
    failures = 0
    for name, n, expected in GROUND_TRUTH:
        report = brute_force_spex(n, _NAMED_TREES[name], cfg.budget)
        ok = abs(report.lambda_max - expected) <= LAMBDA_TOL
        failures += not ok
        truth.append({"tree": name, "n": n, "lambda_max": report.lambda_max, "expected": expected, "ok": ok})
        log.record(f"{name} n={n}", ok, f"got {report.lambda_max}")

    m_top = min(cfg.m_max or BRUTE_FORCE_DEFAULT[0], BRUTE_FORCE_FULL[0])
    n_top = min(max(cfg.n_values) if cfg.n_values else BRUTE_FORCE_DEFAULT[1], BRUTE_FORCE_FULL[1])
    full_range = (m_top, n_top) == BRUTE_FORCE_FULL
    if not full_range:
        log.log(f"brute_force_spex covers m <= {m_top}, n <= {n_top}; m_max = 7 with n_values = 8 runs the full grid")
    cells = [
        (tree, n)
        for tree in _trees(2, m_top)
        for n in range(tree.vertex_count, n_top + 1)
    ]
    agree = 0
    for i, (tree, n) in enumerate(cells, 1):
        report = brute_force_spex(n, tree, cfg.budget)
        P = profile(tree)
        ok = True
        if report.candidate_lambda is not None:
            ok &= report.lambda_max >= report.candidate_lambda - LAMBDA_TOL
            agree += bool(report.agrees)
        if n > P.l:
            ok &= report.lambda_max <= spectral_window(n, P.m, P.l)[1] + LAMBDA_TOL
        failures += not ok
        log.record(f"tree {_tree_id(tree)} n={n}", ok)
        log.progress(i, len(cells))
    return {
        "ground_truth": truth,
        "cells": len(cells),
        "m_max": m_top,
        "n_max": n_top,
        "full_range": full_range,
        "candidate_agrees": agree,
        "failures": failures,
    }


CAMPAIGNS: Dict[str, Callable[[SweepConfig, CampaignLog, np.random.Generator], dict]] = {
    "embedding_completeness": embedding_completeness,
    "nonembedding_soundness": nonembedding_soundness,
    "threshold_embedding": threshold_embedding,
    "f_consistency": f_consistency,
    "sandwich_lower": sandwich_lower,
    "refined_upper": refined_upper,
    "degree_count": degree_count,
    "perron_entries": perron_entries,
    "brute_force_spex": brute_force_spex_campaign,
    "construction_soundness": construction_soundness,
    "gap_asymptotics": gap_asymptotics,
    "constants_threshold": constants_threshold,
}


def run_campaign(name: str, cfg: SweepConfig, log: Optional[CampaignLog] = None) -> dict:
    """One campaign with its own seeded generator (seed, campaign index)."""
    log = log if log is not None else CampaignLog(name)
    log.name = name
    rng = np.random.default_rng([cfg.seed, CAMPAIGN_NAMES.index(name)])
    return CAMPAIGNS[name](cfg, log, rng)


def run_sweep(cfg: SweepConfig, log: Optional[CampaignLog] = None) -> dict:
    log = log if log is not None else CampaignLog()
    results = {name: run_campaign(name, cfg, log) for name in cfg.campaigns}
    return {"campaigns": results, "config": cfg.as_report()}
