"""CLI entry point: one verb per invocation, JSON report on stdout."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .campaigns import run_sweep
from .config import load_config
from .constructors import (
    CaterpillarSpec,
    alternating_caterpillar,
    canonical_member,
    caterpillar,
    chain_member,
    combine,
    embeddable_member,
    lobster_from_caterpillar,
    random_small_excess_member,
)
from .decomposition import decompose
from .embedder import (
    DEFAULT_BUDGET,
    certify_nonembeddable,
    embed_highdeg_join,
    embed_star_host,
    find_embedding_exact,
    join_host,
)
from .errors import ConditionsNotMet, ParseError, PreconditionFailed, SpexTreeError
from .extremal import brute_force_spex, build_candidate, certify_T_free, enumerate_trees
from .graphs import max_degree, parse_graph
from .logging_util import CampaignLog
from .report import flatten_rows, to_csv, to_json, write_report
from .spectral import DEFAULT_TOL, spectral_radius, spectral_window, spex_bounds
from .trees import LabeledTree, is_path, is_star, parse_tree, profile, to_edge_list
from .witness import check_with, find_witness, refine

log = logging.getLogger("spextree")

# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

FAMILIES = ("canonical", "embeddable", "chain", "caterpillar", "lobster", "random", "combine")
ORACLE_KINDS = ("spex", "trees", "free", "candidate")
PROGRESS_INTERVAL = 50


class UsageError(Exception):
    """Flags that parse but do not fit together; exit status 2."""


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}", path=str(path))


def _tree(path: Optional[Path]) -> LabeledTree:
    if path is None:
        raise UsageError("this command needs --tree FILE")
    return parse_tree(_read(path))


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma list of integers, got {text!r}")


def _require(args, *names: str):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


def _family_name(tree: LabeledTree) -> Optional[str]:
    if is_star(tree):
        return "star"
    if is_path(tree):
        return "path"
    return None


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def _analyze(args) -> dict:
    tree = _tree(args.tree)
    out = profile(tree).as_report()
    out["family"] = _family_name(tree)
    return out


def _decompose(args) -> dict:
    tree = _tree(args.tree)
    return decompose(tree).as_report()


def _hypothesis(args) -> dict:
    tree = _tree(args.tree)
    P = profile(tree)
    D = decompose(tree, P)
    if args.subset is not None:
        cert = check_with(tree, P, D, _ints(args.subset))
    else:
        cert = find_witness(tree, P, D)
    if cert.valid:
        # a singleton witness is already minimal
        refined = refine(tree, P, D, cert.witness) if len(cert.witness) > 1 else cert.witness
        cert = cert.with_refined(refined)
    return cert.as_report()


def _embed(args) -> dict:
    tree = _tree(args.tree)
    P = profile(tree)
    host = args.host or ["star"]
    if host == ["star"]:
        D = decompose(tree, P)
        cert = find_witness(tree, P, D)
        return embed_star_host(tree, P, D, cert, args.budget).as_report()
    if host[0] == "join":
        if len(host) != 3:
            raise UsageError("--host join needs two graph files")
        jh = join_host(parse_graph(_read(host[1])), parse_graph(_read(host[2])))
        if max_degree(jh.part2) >= P.delta:
            try:
                return embed_highdeg_join(tree, P, jh).as_report()
            except PreconditionFailed as e:
                log.info("degree threshold does not apply: %s", e.message)
        else:
            try:
                return certify_nonembeddable(tree, P, jh).as_report()
            except (ConditionsNotMet, PreconditionFailed) as e:
                log.info("counting certificate does not apply: %s", e.message)
        graph = jh.graph
    elif len(host) == 1:
        graph = parse_graph(_read(host[0]))
    else:
        raise UsageError("--host takes 'star', 'join FILE FILE' or one FILE")
    search = find_embedding_exact(tree, graph, args.budget)
    if search.found:
        return search.as_embedding().as_report()
    return {"t_free": True, "expansions": search.expansions}


def _construct(args) -> dict:
    family = args.family
    if family in ("canonical", "embeddable", "random"):
        _require(args, "m", "l", "delta")
        if family == "canonical":
            tree = canonical_member(args.m, args.l, args.delta)
        elif family == "embeddable":
            tree = embeddable_member(args.m, args.l, args.delta)
        else:
            tree = random_small_excess_member(args.m, args.l, args.delta, args.seed if args.seed is not None else 0)
    elif family == "chain":
        _require(args, "m", "delta")
        tree = chain_member(args.m, args.delta)
    elif family in ("caterpillar", "lobster"):
        if args.spine is not None:
            d = tuple(_ints(args.spine))
            spec = CaterpillarSpec(len(d), d)
        else:
            _require(args, "k", "d1", "d2")
            spec = alternating_caterpillar(args.k, args.d1, args.d2)
        if family == "caterpillar":
            tree = caterpillar(spec)
        else:
            _require(args, "pendant")
            tree = lobster_from_caterpillar(spec, args.pendant)
    else:
        _require(args, "tree", "tree2")
        tree = combine(_tree(args.tree), _tree(args.tree2)).tree
    return {"family": family, "edge_list": to_edge_list(tree), "profile": profile(tree).as_report()}


def _bounds(args) -> dict:
    _require(args, "n")
    tree = _tree(args.tree)
    P = profile(tree)
    out = spex_bounds(P, args.n, args.embeddable, args.c).as_report()
    out["window"] = list(spectral_window(args.n, P.m, P.l))
    return out


def _oracle(args) -> dict:
    if args.kind == "trees":
        _require(args, "m")
        trees = list(enumerate_trees(args.m))
        return {"m": args.m, "count": len(trees), "trees": [to_edge_list(t) for t in trees]}
    tree = _tree(args.tree)
    if args.kind == "spex":
        _require(args, "n")
        return brute_force_spex(args.n, tree, args.budget).as_report()
    if args.kind == "free":
        if not args.host or len(args.host) != 1:
            raise UsageError("oracle --kind free needs --host FILE")
        return certify_T_free(parse_graph(_read(args.host[0])), tree, args.budget).as_report()
    _require(args, "n")
    cand = build_candidate(profile(tree), args.n, args.mode)
    out = {
        "mode": cand.mode,
        "n": cand.host.n,
        "regular": cand.regular,
        "lambda": spectral_radius(cand.graph, tol=args.tol).lam,
    }
    if cand.certificate is not None:
        out["certificate"] = cand.certificate.as_report()
    return out


def _sweep(args) -> str:
    if args.config is None:
        raise UsageError("sweep needs --config FILE")
    cfg = load_config(args.config).override(args.seed, args.budget_override, args.tol_override)
    campaign_log = CampaignLog(progress_interval=PROGRESS_INTERVAL)
    result = run_sweep(cfg, campaign_log)
    campaign_log.write_logs(args.log_dir)
    if args.csv:
        return to_csv(flatten_rows(result["campaigns"]))
    return to_json(result)


VERBS = {
    "analyze": _analyze,
    "decompose": _decompose,
    "hypothesis": _hypothesis,
    "embed": _embed,
    "construct": _construct,
    "bounds": _bounds,
    "oracle": _oracle,
}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tree", type=Path, help="Tree in edge-list format (one 'u v' per line)")
    common.add_argument("--out", type=Path, help="Write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="Seed for random generators")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="spex-tree",
        description="Spectral Turan toolkit for trees: profiles, witnesses, embeddings, bounds and oracles",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("analyze", parents=[common], help="Profile (m, l, delta, t) of a tree")
    sub.add_parser("decompose", parents=[common], help="The J / J1 / J2 / J' decomposition")

    p = sub.add_parser("hypothesis", parents=[common], help="Find or check a hypothesis witness")
    p.add_argument("--subset", help="Check this comma list of vertices instead of searching")

    p = sub.add_parser("embed", parents=[common], help="Embed the tree into a host")
    p.add_argument("--host", nargs="+", metavar="SPEC",
                   help="'star' (default), 'join FILE FILE', or a graph FILE")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="Node expansions for exact search")

    p = sub.add_parser("construct", parents=[common], help="Build a family member")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--k", type=int, help="Spine length for alternating caterpillars")
    p.add_argument("--d1", type=int, help="Leaves on odd spine positions")
    p.add_argument("--d2", type=int, help="Leaves on even spine positions")
    p.add_argument("--spine", help="Explicit leaf counts d1,d2,... along the spine")
    p.add_argument("--pendant", type=int, help="Pendant edges per small-side caterpillar leaf")
    p.add_argument("--tree2", type=Path, help="Second tree for --family combine")

    p = sub.add_parser("bounds", parents=[common], help="The window for spex(n, T)")
    p.add_argument("--n", type=int)
    p.add_argument("--embeddable", action="store_true", help="Use the tighter window for star-host embeddable trees")
    p.add_argument("--c", type=int, help="Degree-count bound (default (m-1)((delta-1)^2+1))")

    p = sub.add_parser("oracle", parents=[common], help="Exhaustive oracles at small size")
    p.add_argument("--kind", choices=ORACLE_KINDS, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--host", nargs=1, metavar="FILE", help="Graph for --kind free")
    p.add_argument("--mode", choices=("lower", "star_host"), default="lower", help="Candidate for --kind candidate")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("sweep", parents=[common], help="Run campaigns from a config file")
    p.add_argument("--config", type=Path)
    p.add_argument("--csv", action="store_true", help="Flatten campaign summaries to CSV")
    p.add_argument("--log-dir", type=Path, help="Write sweep_log.txt and failures.txt here")
    p.add_argument("--budget", dest="budget_override", type=int, help="Override the config budget")
    p.add_argument("--tol", dest="tol_override", type=float, help="Override the config tolerance")
    return parser


def run(argv: Optional[List[str]] = None, stdout=None) -> int:
    """Exit status: 0 success, 1 domain error (error object printed), 2 usage error."""
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "sweep":
            text = _sweep(args)
        else:
            text = to_json(VERBS[args.command](args))
    except UsageError as e:
        print(f"{parser.prog} {args.command}: error: {e}", file=sys.stderr)
        return 2
    except SpexTreeError as e:
        write_report(to_json(e.to_dict()), stream=stdout)
        return 1
    write_report(text, args.out, stream=stdout)
    return 0


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
