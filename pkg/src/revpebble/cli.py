"""Command-line interface: ``revpebble SUBCOMMAND ...``.

Stats go to stdout as one JSON object per line; diagnostics go to stderr.
Exit status is 0 on success, 1 for bad input or a failed validation, 2 when
an oracle's size cap is exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence, TextIO

from . import generators, oracle
from .pebbling import PebblingError, encode, format_moves, parse_moves, replay_stream
from .ranking import (
    RankingError,
    as_undirected,
    coloring_to_matchings,
    erank_opt,
    format_coloring,
    format_matchings,
    matchings_to_coloring,
    parse_coloring,
    parse_matchings,
    rank_of,
    validate_coloring,
)
from .strategy import (
    StrategyError,
    format_strategy,
    matchings_to_strategy,
    parse_strategy,
    solve,
    strategy_to_matchings,
)
from .treecore import GraphError, RootedTree, chain, random_tree, read_graph, read_tree, underlying

FORMATS = ("coloring", "matchings", "strategy")
FAMILIES = ("chain", "bt", "bt-eps", "separator", "bottom-up")


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    with open(path, "rb") as fh:
        return fh.read().decode("utf-8")


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _read_undirected(path: str):
    edges = []
    for lineno, raw in enumerate(_read_text(path).splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        if len(parts) != 2:
            raise GraphError(f"{path}:{lineno}: expected 'u v'")
        edges.append((parts[0], parts[1]))
    return as_undirected(edges)


# -- subcommands -------------------------------------------------------------

def cmd_solve(args, out: TextIO) -> None:
    t = read_tree(args.tree)
    res = solve(t)
    stem = Path(args.tree).stem
    outdir = Path(args.out_dir)
    artifacts = {
        "coloring": format_coloring(res.coloring),
        "strategy": format_strategy(res.strategy),
        "moves": format_moves(res.moves()),
    }
    paths = {}
    outdir.mkdir(parents=True, exist_ok=True)
    for ext, text in artifacts.items():
        paths[ext] = outdir / f"{stem}.{ext}"
        _write_atomic(paths[ext], text)
    out.write(f"rev = {res.rev}\n")
    for ext, p in paths.items():
        out.write(f"{ext} = {p}\n")


def cmd_erank(args, out: TextIO) -> None:
    tree = _read_undirected(args.tree)
    col = erank_opt(tree)
    out.write(f"erank = {rank_of(col)}\n")
    out.write(format_coloring(col))


def cmd_validate(args, out: TextIO) -> None:
    g = read_graph(args.graph)
    seq = parse_moves(_read_text(args.moves))
    stats = replay_stream(g, [encode(g, seq)], args.variant)
    out.write(json.dumps({"variant": args.variant, "space": stats.space, "time": stats.time}) + "\n")


def cmd_convert(args, out: TextIO) -> None:
    t = read_tree(args.tree)
    u = underlying(t)
    text = _read_text(args.input)
    if args.src == "coloring":
        col = parse_coloring(text)
        validate_coloring(u, col)
        seq = coloring_to_matchings(u, col)
    elif args.src == "matchings":
        seq = parse_matchings(text, u)
    else:
        seq = strategy_to_matchings(t, parse_strategy(text, t))
    if args.dst == "coloring":
        result = format_coloring(matchings_to_coloring(u, seq))
    elif args.dst == "matchings":
        result = format_matchings(seq)
        matchings_to_coloring(u, seq)
    else:
        result = format_strategy(matchings_to_strategy(t, seq))
    out.write(result)


def _family_tree(args) -> RootedTree:
    if args.tree:
        return read_tree(args.tree)
    if args.n is None:
        raise CliError(f"{args.family} needs --tree or --n")
    if args.shape == "chain":
        return chain(args.n)
    return random_tree(args.n, args.seed, args.max_degree)


def cmd_generate(args, out: TextIO) -> None:
    fam = args.family
    if fam == "chain":
        if args.n is None:
            raise CliError("chain needs --n")
        rep = generators.chain_pebbling(args.n)
    elif fam == "bt":
        if args.h is None:
            raise CliError("bt needs --h")
        rep = generators.bt_optimal_pebbling(args.h)
    elif fam == "bt-eps":
        if args.h is None or args.k is None:
            raise CliError("bt-eps needs --h and --k")
        rep = generators.bt_epsilon_pebbling(args.h, args.k)
    elif fam == "separator":
        if args.k is None:
            raise CliError("separator needs --k")
        rep = generators.separator_pebbling(_family_tree(args), args.k, args.max_degree)
    else:
        rep = generators.bottom_up_pebbling(_family_tree(args))
    if args.moves:
        path = Path(args.moves)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
        with os.fdopen(fd, "w", newline="\n") as fh:
            rep.write_moves(fh)
        os.replace(tmp, path)
    out.write(json.dumps(rep.record()) + "\n")


def cmd_oracle(args, out: TextIO) -> None:
    g = read_graph(args.graph)
    if args.which == "rev":
        res = oracle.rev_oracle(g)
    elif args.which == "vrev":
        res = oracle.vrev_oracle(g)
    elif args.which == "steps":
        if args.budget is None:
            raise CliError("steps needs --budget")
        res = oracle.min_steps_oracle(g, args.budget, args.variant)
    else:
        res = oracle.OracleResult(oracle.dt_oracle(g, prune=not args.no_prune))
    witness = res.witness
    if args.witness:
        if witness is None:
            raise CliError("this oracle produces no witness")
        _write_atomic(Path(args.witness), format_moves(witness))
    out.write(f"{res.value}\n")


def cmd_dt(args, out: TextIO, inp: TextIO) -> None:
    g = read_graph(args.graph)
    game = oracle.DTGame(g, prune=not args.no_prune)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10 * len(g) + 100))
    if not args.interactive:
        out.write(f"{game.value(*game.start())}\n")
        return
    mask, c = game.start()
    names = g.nodes
    out.write(f"value = {game.value(mask, c)}\n")
    out.write(f"challenge {names[c]}\n")
    while game._need[c] & mask != game._need[c]:
        u = game.best_move(mask, c)
        mask |= 1 << u
        out.write(f"pebble {names[u]}; challenge {names[u]} or {names[c]}?\n")
        out.flush()
        while True:
            line = inp.readline()
            if not line:
                raise CliError("input ended before the game finished")
            pick = line.strip()
            if pick in (names[u], names[c]):
                break
            out.write(f"answer {names[u]} or {names[c]}\n")
        c = g.index[pick]
    out.write(f"pebbles = {bin(mask).count('1')}\n")


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="revpebble", description="Reversible pebbling of rooted trees.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="optimal pebbling number with certificate files")
    s.add_argument("tree")
    s.add_argument("--out-dir", default=".", help="where to write .coloring/.strategy/.moves (default: .)")

    s = sub.add_parser("erank", help="optimal edge rank coloring of an undirected tree")
    s.add_argument("tree")

    s = sub.add_parser("validate", help="check a move log")
    s.add_argument("--variant", choices=("persistent", "visiting"), default="persistent")
    s.add_argument("graph")
    s.add_argument("moves")

    s = sub.add_parser("convert", help="translate between coloring, matchings and strategy")
    s.add_argument("--from", dest="src", choices=FORMATS, required=True)
    s.add_argument("--to", dest="dst", choices=FORMATS, required=True)
    s.add_argument("tree")
    s.add_argument("input")

    s = sub.add_parser("generate", help="explicit strategies for tree families")
    s.add_argument("family", choices=FAMILIES)
    s.add_argument("--n", type=int)
    s.add_argument("--h", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--tree", help="input tree for separator/bottom-up")
    s.add_argument("--shape", choices=("chain", "random"), default="chain", help="tree built from --n without --tree")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-degree", type=int, default=generators.DEFAULT_MAX_DEGREE)
    s.add_argument("--moves", help="write the move log here")

    s = sub.add_parser("oracle", help="exhaustive search on small graphs")
    s.add_argument("--which", choices=("rev", "vrev", "steps", "dt"), required=True)
    s.add_argument("--budget", type=int)
    s.add_argument("--variant", choices=("persistent", "visiting"), default="persistent")
    s.add_argument("--witness", help="write a witness move log here")
    s.add_argument("--no-prune", action="store_true", help="dt: let the pebbler pick any node")
    s.add_argument("graph")

    s = sub.add_parser("dt", help="Dymond-Tompa game value, or play it as challenger")
    s.add_argument("--interactive", action="store_true")
    s.add_argument("--no-prune", action="store_true")
    s.add_argument("graph")
    return p


def run(argv: Sequence[str], stdin: TextIO, stdout: TextIO, stderr: TextIO) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "solve": cmd_solve,
        "erank": cmd_erank,
        "validate": cmd_validate,
        "convert": cmd_convert,
        "generate": cmd_generate,
        "oracle": cmd_oracle,
    }
    try:
        if args.command == "dt":
            cmd_dt(args, stdout, stdin)
        else:
            handlers[args.command](args, stdout)
    except oracle.SizeCapExceeded as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except CliError as exc:
        stderr.write(f"error: {exc}\n")
        return exc.code
    except (GraphError, PebblingError, RankingError, StrategyError, oracle.Unreachable, OSError, UnicodeDecodeError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv, sys.stdin, sys.stdout, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
