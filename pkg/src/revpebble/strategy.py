"""Strategy trees: recursive edge splits of a rooted tree, their conversion
to and from contraction rounds, and compilation into pebbling sequences.

An internal node labelled ``(u, v)`` cuts the current piece into ``T_u``
(left) and the remainder (right). Its depth bounds the number of pebbles the
compiled sequence uses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence, Union

from .pebbling import Move, PebbleSequence, place, remove
from .ranking import (
    EdgeColoring,
    MatchingSequence,
    coloring_to_matchings,
    erank_opt,
    rank_of,
    validate_matchings,
)
from .treecore import Edge, RootedTree, uedge, underlying


@dataclass(frozen=True)
class Leaf:
    node: str


@dataclass(frozen=True)
class Internal:
    edge: Edge
    left: "StrategyTree"
    right: "StrategyTree"


StrategyTree = Union[Leaf, Internal]


class StrategyError(ValueError):
    pass


def depth(s: StrategyTree) -> int:
    if isinstance(s, Leaf):
        return 1
    return 1 + max(depth(s.left), depth(s.right))


def _below(t: RootedTree, u: str, piece: frozenset[str]) -> frozenset[str]:
    out = {u}
    stack = [u]
    while stack:
        for c in t.children[stack.pop()]:
            if c in piece and c not in out:
                out.add(c)
                stack.append(c)
    return frozenset(out)


def _check(t: RootedTree, s: StrategyTree, piece: frozenset[str]) -> int:
    if isinstance(s, Leaf):
        if piece != {s.node}:
            shown = " ".join(sorted(piece)[:6])
            raise StrategyError(f"leaf {s.node} does not match piece {{{shown}}}")
        return 1
    if not isinstance(s, Internal):
        raise StrategyError(f"not a strategy node: {s!r}")
    u, v = s.edge
    if u not in piece or v not in piece or t.parent.get(u) != v:
        raise StrategyError(f"{u}>{v} is not an edge of the current piece")
    below = _below(t, u, piece)
    return 1 + max(_check(t, s.left, below), _check(t, s.right, piece - below))


def validate_strategy(t: RootedTree, s: StrategyTree) -> int:
    """Check that ``s`` is a strategy tree for ``t``; return its depth in nodes."""
    return _check(t, s, frozenset(t.nodes))


def strategy_to_matchings(t: RootedTree, s: StrategyTree) -> MatchingSequence:
    """Round ``i`` contracts the edges of internal nodes at level ``i``
    (leaves are level 0, an internal node is one above its higher child)."""
    d = validate_strategy(t, s)
    rounds: list[set[Edge]] = [set() for _ in range(d - 1)]

    def level(x: StrategyTree) -> int:
        if isinstance(x, Leaf):
            return 0
        lv = 1 + max(level(x.left), level(x.right))
        rounds[lv - 1].add(uedge(*x.edge))
        return lv

    level(s)
    return [frozenset(r) for r in rounds]


def matchings_to_strategy(t: RootedTree, seq: Sequence[frozenset[Edge]]) -> StrategyTree:
    """Rebuild a strategy tree from contraction rounds.

    The root is the edge contracted last; both sides recurse on the rounds
    restricted to them.
    """
    validate_matchings(underlying(t), seq)
    round_of = {uedge(a, b): i for i, step in enumerate(seq) for a, b in step}

    def build(piece: frozenset[str]) -> StrategyTree:
        if len(piece) == 1:
            return Leaf(next(iter(piece)))
        inner = [(round_of[uedge(u, t.parent[u])], u) for u in piece if t.parent[u] in piece]
        last = max(r for r, _ in inner)
        cut = [u for r, u in inner if r == last]
        if len(cut) != 1:
            raise StrategyError(f"round {last + 1} does not end with a single edge on a piece")
        u = cut[0]
        below = _below(t, u, piece)
        return Internal((u, t.parent[u]), build(below), build(piece - below))

    return build(frozenset(t.nodes))


def _steps(s: StrategyTree) -> int:
    if isinstance(s, Leaf):
        return 1
    return 2 * _steps(s.left) + _steps(s.right)


def _emit(s: StrategyTree, backwards: bool) -> Iterator[Move]:
    # forward: A, B, rev(A); backwards: A, rev(B), rev(A)
    if isinstance(s, Leaf):
        yield remove(s.node) if backwards else place(s.node)
        return
    yield from _emit(s.left, False)
    yield from _emit(s.right, backwards)
    yield from _emit(s.left, True)


def iter_compile(t: RootedTree, s: StrategyTree) -> Iterator[Move]:
    """Stream the pebbling described by ``s``: pebble the cut child, pebble
    the rest while holding it, then undo the first part."""
    validate_strategy(t, s)
    expected = _steps(s)
    n = 0
    for mv in _emit(s, False):
        n += 1
        yield mv
    assert n == expected


def compile_strategy(t: RootedTree, s: StrategyTree) -> PebbleSequence:
    return PebbleSequence(iter_compile(t, s))


compile = compile_strategy


@dataclass(frozen=True)
class SolveResult:
    tree: RootedTree = field(repr=False)
    rev: int
    strategy: StrategyTree = field(repr=False)
    coloring: EdgeColoring = field(repr=False)

    @cached_property
    def sequence(self) -> PebbleSequence:
        return compile_strategy(self.tree, self.strategy)

    def moves(self) -> Iterator[Move]:
        return iter_compile(self.tree, self.strategy)

    @property
    def steps(self) -> int:
        return _steps(self.strategy)


def solve(t: RootedTree) -> SolveResult:
    """Optimal persistent pebbling number of ``t`` with certificate strategy."""
    u = underlying(t)
    coloring = erank_opt(u)
    strategy = matchings_to_strategy(t, coloring_to_matchings(u, coloring))
    d = depth(strategy)
    assert d == rank_of(coloring) + 1, (d, rank_of(coloring))
    return SolveResult(tree=t, rev=d, strategy=strategy, coloring=coloring)


# -- text format -----------------------------------------------------------------

def format_strategy(s: StrategyTree) -> str:
    parts: list[str] = []

    def go(x: StrategyTree) -> None:
        if isinstance(x, Leaf):
            parts.append(x.node)
            return
        parts.append(f"({x.edge[0]}>{x.edge[1]} ")
        go(x.left)
        parts.append(" ")
        go(x.right)
        parts.append(")")

    go(s)
    return "".join(parts) + "\n"


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_strategy(text: str | bytes, t: RootedTree) -> StrategyTree:
    """Parse ``(u>v LEFT RIGHT)`` / bare-leaf syntax; edge tokens are resolved against ``t``."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    toks = _TOKEN.findall(text)
    pos = 0

    def edge_of(tok: str) -> Edge:
        hits = [(tok[:i], tok[i + 1:]) for i, ch in enumerate(tok) if ch == ">" and (tok[:i], tok[i + 1:]) in t.edges]
        if len(hits) != 1:
            raise StrategyError(f"cannot resolve edge token {tok!r}")
        return hits[0]

    def node() -> StrategyTree:
        nonlocal pos
        if pos >= len(toks):
            raise StrategyError("unexpected end of strategy text")
        tok = toks[pos]
        pos += 1
        if tok == ")":
            raise StrategyError("unexpected ')'")
        if tok != "(":
            return Leaf(tok)
        if pos >= len(toks):
            raise StrategyError("unexpected end of strategy text")
        e = edge_of(toks[pos])
        pos += 1
        left = node()
        right = node()
        if pos >= len(toks) or toks[pos] != ")":
            raise StrategyError("expected ')'")
        pos += 1
        return Internal(e, left, right)

    s = node()
    if pos != len(toks):
        raise StrategyError("trailing text after strategy")
    return s
