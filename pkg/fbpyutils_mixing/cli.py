"""Command-line front end.

Commands::

    fbpyutils-mixing gen cycle 5 0.5
    fbpyutils-mixing gen cayley z5 --gens id,+1 --probs 0.5,0.5 --out z5.chain
    fbpyutils-mixing analyze --chain z5.chain --r 0.25 --r 0.5
    fbpyutils-mixing bounds --generate "cycle 5 0.5" --epsilon 0.5 --paths alt-derive
    fbpyutils-mixing paths --chain z5.chain --paths cayley --group z5 --gens id,+1
    fbpyutils-mixing verify --seed 7 --count 500 --max-n 6

Exit codes: 0 success, 1 usage error, 2 validation error, 3 verification violations.
"""
import argparse
import os
import sys
from typing import List, Optional, Tuple

import pandas as pd

from fbpyutils_mixing import logger
from fbpyutils_mixing.bounds.audit import audit_chain, audit_fleet, builtin_examples
from fbpyutils_mixing.bounds.report import analyze_chain, build_bound_report
from fbpyutils_mixing.chain.core import MarkovChain
from fbpyutils_mixing.chain.generators import (
    generate_cayley_walk,
    generate_complete_graph_walk,
    generate_cycle_walk,
    generate_eulerian_walk,
    random_fleet,
)
from fbpyutils_mixing.chain.groups import GroupPresentation, parse_group_spec
from fbpyutils_mixing.chain.io import dump_chain, load_chain, load_multigraph
from fbpyutils_mixing.errors import ChainError, PathFamilyError
from fbpyutils_mixing.paths.alternating import (
    alt_vertex_congestion,
    build_alternating_paths,
    derive_alternating_from_plain,
)
from fbpyutils_mixing.paths.cayley import cayley_alternating_paths, cayley_word_paths
from fbpyutils_mixing.paths.congestion import (
    boundary_prob,
    edge_congestion,
    edge_loads,
    path_stats,
    vertex_congestion,
    vertex_loads,
)
from fbpyutils_mixing.paths.family import PathFamily, build_bfs_paths, load_paths
from fbpyutils_mixing.utils.validators import check_epsilon, check_ratio
from fbpyutils_mixing.visualization.display import emit, frame_to_tsv, render_frame

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_VIOLATIONS = 3

GENERATORS = ("cycle", "complete", "eulerian", "cayley", "random")
PATH_SOURCES = ("bfs", "cayley", "alt-auto", "alt-derive")


class UsageError(Exception):
    """Invalid command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _group_from_args(args) -> Optional[GroupPresentation]:
    if not getattr(args, "group", None):
        return None
    return parse_group_spec(args.group, args.gens, args.probs)


def generate_from_spec(tokens: List[str], args) -> Tuple[MarkovChain, Optional[GroupPresentation]]:
    """
    Build a chain from generator tokens such as ['cycle', '5', '0.5'] or ['cayley', 'z5'].

    Raises:
        UsageError: Unknown generator or wrong number of arguments.
    """
    if not tokens or tokens[0] not in GENERATORS:
        raise UsageError(f"Unknown generator {tokens[:1]}; expected one of {GENERATORS}.")
    kind, rest = tokens[0], tokens[1:]
    try:
        if kind == "cycle" and len(rest) == 2:
            return generate_cycle_walk(int(rest[0]), float(rest[1])), None
        if kind == "complete" and len(rest) == 1:
            return generate_complete_graph_walk(int(rest[0])), None
        if kind == "eulerian" and len(rest) in (1, 2):
            d = int(rest[1]) if len(rest) == 2 else getattr(args, "d", None)
            return generate_eulerian_walk(load_multigraph(_read(rest[0])), d), None
        if kind == "cayley" and len(rest) in (1, 2, 3):
            gens = rest[1] if len(rest) > 1 else getattr(args, "gens", None)
            probs = rest[2] if len(rest) > 2 else getattr(args, "probs", None)
            group = parse_group_spec(rest[0], gens, probs)
            return generate_cayley_walk(group), group
        if kind == "random" and not rest:
            seed = getattr(args, "seed", 7)
            max_n = getattr(args, "max_n", 6)
            return random_fleet(seed, 1, max_n)[0], None
    except ValueError as e:
        if isinstance(e, ChainError):
            raise
        raise UsageError(f"Invalid generator arguments {rest}: {e}")
    raise UsageError(f"Wrong arguments for generator '{kind}': {rest}")


def _chain_from_args(args) -> Tuple[MarkovChain, Optional[GroupPresentation]]:
    if args.chain and args.generate:
        raise UsageError("Use either --chain or --generate, not both.")
    if args.chain:
        name = os.path.splitext(os.path.basename(args.chain))[0]
        chain, group = load_chain(_read(args.chain), name=name), None
    elif args.generate:
        chain, group = generate_from_spec(args.generate.split(), args)
    else:
        raise UsageError("A chain is required: --chain FILE or --generate SPEC.")
    return chain, _group_from_args(args) or group


def _families(args, chain: MarkovChain, group: Optional[GroupPresentation]) -> Tuple[PathFamily, str]:
    """Plain family and alternating source for a --paths value."""
    source = args.paths
    if source.startswith("file:"):
        return load_paths(_read(source[len("file:"):]), chain), "auto"
    if source not in PATH_SOURCES:
        raise UsageError(f"--paths must be one of {PATH_SOURCES} or file:PATH, got '{source}'.")
    if source == "cayley":
        if group is None:
            raise UsageError("--paths cayley needs a Cayley chain or --group.")
        return cayley_word_paths(group, chain).family, "cayley"
    family = build_bfs_paths(chain, parallel=args.parallel)
    return family, "derive" if source == "alt-derive" else "auto"


def _render(frame: pd.DataFrame, args, title: Optional[str] = None) -> str:
    return frame_to_tsv(frame, title=title) if args.tsv else render_frame(frame, title=title)


def run_gen(args) -> int:
    chain, _ = generate_from_spec([args.generator] + args.params, args)
    emit(dump_chain(chain), args.out)
    return EXIT_OK


def run_analyze(args) -> int:
    chain, _ = _chain_from_args(args)
    report = analyze_chain(chain, args.start, args.epsilon, r_values=args.r, parallel=args.parallel)
    emit(report.to_tsv() if args.tsv else report.to_text(), args.out)
    return EXIT_OK


def run_bounds(args) -> int:
    chain, group = _chain_from_args(args)
    family, alternating = _families(args, chain, group)
    report = build_bound_report(
        chain,
        args.start,
        args.epsilon,
        r_small=args.r or None,
        r_noholding=args.r or None,
        family=family,
        alternating=alternating,
        group=group,
        use_sharper=args.sharper,
        parallel=args.parallel,
    )
    emit(report.to_tsv() if args.tsv else report.to_text(), args.out)
    return EXIT_OK


def run_paths(args) -> int:
    chain, group = _chain_from_args(args)
    family, alternating = _families(args, chain, group)
    stats = path_stats(chain, family)
    summary = {
        "rho_v": vertex_congestion(chain, family),
        "rho_e": edge_congestion(chain, family),
        "P0": boundary_prob(chain, family),
        "ell": stats.ell,
        "ell_ave": stats.ell_ave,
        "rho_v_ave": stats.rho_v_ave,
    }
    try:
        if alternating == "derive":
            alt = derive_alternating_from_plain(chain, family)
        elif alternating == "cayley":
            alt = cayley_alternating_paths(group, chain).family
        else:
            alt = build_alternating_paths(chain, parallel=args.parallel)
        summary["rho_dot_v"], summary["P0*"] = alt_vertex_congestion(chain, alt)
        note = None
    except PathFamilyError as e:
        note = f"alternating family: {e}"
    frame = pd.DataFrame({"quantity": list(summary), "value": list(summary.values())})
    parts = [
        _render(frame, args, title=f"chain={chain.name} family={family.source}"),
        _render(vertex_loads(chain, family), args, title="vertex loads"),
        _render(edge_loads(chain, family), args, title="edge loads"),
    ]
    if note:
        parts.append(note)
    emit("\n".join(p.rstrip("\n") for p in parts), args.out)
    return EXIT_OK


def run_verify(args) -> int:
    if args.chain or args.generate:
        chain, group = _chain_from_args(args)
        result = audit_chain(chain, group=group, inject_fault=args.inject_fault)
    else:
        fleet = [(c, None) for c in random_fleet(args.seed, args.count, args.max_n)]
        result = audit_fleet(builtin_examples() + fleet, parallel=args.parallel, inject_fault=args.inject_fault)
    title = (
        f"chains={result.chains} checks={result.checks} violations={len(result.violations)} "
        f"observations={len(result.observations)}"
    )
    lines = [title]
    if result.violations:
        lines.append(_render(result.to_frame(), args, title="violations"))
    emit("\n".join(lines), args.out)
    return EXIT_OK if result.ok else EXIT_VIOLATIONS


def _epsilon(text: str) -> float:
    try:
        return check_epsilon(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _ratio(text: str) -> float:
    try:
        return check_ratio(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_chain_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--chain", help="Chain file.")
    parser.add_argument("--generate", help="Generator spec, e.g. 'cycle 5 0.5' or 'cayley z5 id,+1 0.5,0.5'.")
    parser.add_argument("--group", help="Group of a Cayley chain read from file, e.g. z5 or s3.")
    parser.add_argument("--gens", help="Comma separated generators of --group.")
    parser.add_argument("--probs", help="Comma separated generator probabilities.")


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tsv", action="store_true", help="Emit tab-separated tables.")
    parser.add_argument("--out", help="Write output to this file instead of stdout.")
    parser.add_argument("--parallel", action="store_true", help="Use a thread pool for enumeration.")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fbpyutils-mixing",
        description="Exact mixing-time analysis of small Markov chains.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)

    gen = commands.add_parser("gen", help="Emit an example chain file.")
    gen.add_argument("generator", choices=GENERATORS)
    gen.add_argument("params", nargs="*", help="Generator parameters.")
    gen.add_argument("--gens", help="Cayley generators.")
    gen.add_argument("--probs", help="Cayley generator probabilities.")
    gen.add_argument("--d", type=int, help="Eulerian degree normaliser.")
    gen.add_argument("--seed", type=int, default=7)
    gen.add_argument("--max-n", type=int, default=6)
    gen.add_argument("--out", help="Output file.")
    gen.set_defaults(handler=run_gen)

    for name, handler, text in (
        ("analyze", run_analyze, "Stationary data, mixing time and profiles."),
        ("bounds", run_bounds, "Every theorem bound next to the empirical mixing time."),
        ("paths", run_paths, "Congestion tables of a path family."),
    ):
        sub = commands.add_parser(name, help=text)
        _add_chain_source(sub)
        _add_output(sub)
        sub.add_argument("--epsilon", type=_epsilon, default=0.5)
        sub.add_argument("--start", type=int, default=0)
        sub.add_argument(
            "--r", type=_ratio, action="append", default=[],
            help="Cap ratio; repeat for a sweep. Replaces both the small-holding and the no-holding r grids.",
        )
        sub.add_argument("--paths", default="bfs", help="bfs | file:PATH | cayley | alt-auto | alt-derive")
        sub.add_argument("--sharper", action="store_true", help="Also report the sharper evolving-set form.")
        sub.set_defaults(handler=handler)

    verify = commands.add_parser("verify", help="Audit inequalities and bound soundness.")
    _add_chain_source(verify)
    _add_output(verify)
    verify.add_argument("--seed", type=int, default=7)
    verify.add_argument("--count", type=int, default=500)
    verify.add_argument("--max-n", type=int, default=6)
    verify.add_argument("--inject-fault", action="store_true", help="Perturb the root profile (self-test).")
    verify.set_defaults(handler=run_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line and return its exit code.

    Example:
        >>> main(["gen", "complete", "2"])
        # complete(n=2)
        states 2
        ...
        0
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "handler", None):
            raise UsageError("A command is required: gen, analyze, bounds, paths or verify.")
        logger.info(f"Running command '{args.command}'")
        return args.handler(args)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except (ValueError, OSError) as e:
        logger.error(f"Validation error: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_VALIDATION
