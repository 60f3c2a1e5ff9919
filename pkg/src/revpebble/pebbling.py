"""Reversible pebble game: moves, sequence validation and the
visiting/persistent reductions.

A configuration is a ``frozenset`` of node ids. Both placing and removing a
pebble on ``v`` require every in-neighbour of ``v`` to be pebbled; no-op
moves are illegal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, TextIO

import numpy as np

from . import _replay
from .treecore import Dag, GraphError, RootedTree, reroot_at_leaf, subtree

PebbleConfig = frozenset


class MoveKind(enum.Enum):
    PLACE = "+"
    REMOVE = "-"

    def flipped(self) -> "MoveKind":
        return MoveKind.REMOVE if self is MoveKind.PLACE else MoveKind.PLACE


class Move(NamedTuple):
    kind: MoveKind
    node: str

    def __str__(self) -> str:
        return f"{self.kind.value}{self.node}"


def place(v: str) -> Move:
    return Move(MoveKind.PLACE, v)


def remove(v: str) -> Move:
    return Move(MoveKind.REMOVE, v)


@dataclass(frozen=True)
class PebbleSequence:
    moves: tuple[Move, ...] = ()

    def __init__(self, moves: Iterable[Move] = ()):
        object.__setattr__(self, "moves", tuple(moves))

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def __getitem__(self, i):
        return self.moves[i]

    def __add__(self, other: "PebbleSequence") -> "PebbleSequence":
        return PebbleSequence(self.moves + tuple(other))


@dataclass(frozen=True)
class PebbleStats:
    space: int
    time: int


class PebblingError(ValueError):
    """An illegal move (with 0-based ``index``) or a wrong final configuration."""

    def __init__(self, message: str, index: int | None = None, node: str | None = None):
        super().__init__(message)
        self.index = index
        self.node = node


# -- move-log text format ------------------------------------------------------

def parse_moves(text: str | bytes) -> PebbleSequence:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    moves = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line[0] not in "+-" or len(line) == 1 or any(ch.isspace() for ch in line):
            raise PebblingError(f"line {lineno}: expected '+node' or '-node', got {line!r}")
        moves.append(Move(MoveKind(line[0]), line[1:]))
    return PebbleSequence(moves)


def format_moves(seq: Iterable[Move]) -> str:
    return "".join(f"{m}\n" for m in seq)


def write_codes(g: Dag, chunks: Iterable[np.ndarray], fh: TextIO) -> None:
    """Stream encoded move chunks to ``fh`` in move-log format."""
    names = g.nodes
    for chunk in chunks:
        fh.write("".join(f"+{names[c - 1]}\n" if c > 0 else f"-{names[-c - 1]}\n" for c in chunk.tolist()))


def encode(g: Dag, seq: Iterable[Move]) -> np.ndarray:
    out = []
    for t, m in enumerate(seq):
        i = g.index.get(m.node)
        if i is None:
            raise PebblingError(f"move {t} ({m}): unknown node {m.node}", t, m.node)
        out.append(i + 1 if m.kind is MoveKind.PLACE else -(i + 1))
    return np.asarray(out, dtype=np.int32)


def decode(g: Dag, codes: np.ndarray) -> PebbleSequence:
    names = g.nodes
    return PebbleSequence(place(names[c - 1]) if c > 0 else remove(names[-c - 1]) for c in codes.tolist())


# -- replay ------------------------------------------------------------------

class Replayer:
    """Incrementally replays encoded chunks on ``g`` starting from the empty configuration."""

    def __init__(self, g: Dag):
        self.g = g
        self._indptr, self._preds = _replay.pred_csr(g.pred_indices)
        self.state = np.zeros(len(g), dtype=np.uint8)
        self._counters = np.zeros(3, dtype=np.int64)
        self.moves = 0

    @property
    def count(self) -> int:
        return int(self._counters[0])

    @property
    def space(self) -> int:
        return int(self._counters[1])

    @property
    def visited(self) -> bool:
        return bool(self._counters[2])

    def feed(self, codes: np.ndarray) -> None:
        codes = np.ascontiguousarray(codes, dtype=np.int32)
        if codes.size and (codes.min() < -len(self.g) or codes.max() > len(self.g) or not codes.all()):
            bad = int(np.flatnonzero((codes == 0) | (np.abs(codes) > len(self.g)))[0])
            raise PebblingError(f"move {self.moves + bad}: node code {codes[bad]} out of range", self.moves + bad)
        t, kind, y = _replay.replay_chunk(codes, self._indptr, self._preds, self.state, self.g.root_index, self._counters)
        if t >= 0:
            index = self.moves + t
            c = int(codes[t])
            node = self.g.nodes[abs(c) - 1]
            move = f"{'+' if c > 0 else '-'}{node}"
            if kind == _replay.ERR_ALREADY_PEBBLED:
                reason = f"{node} is already pebbled"
            elif kind == _replay.ERR_NOT_PEBBLED:
                reason = f"{node} is not pebbled"
            else:
                reason = f"in-neighbour {self.g.nodes[y]} of {node} is not pebbled"
            raise PebblingError(f"move {index} ({move}): {reason}", index, node)
        self.moves += len(codes)

    def config(self) -> frozenset[str]:
        return frozenset(self.g.nodes[i] for i in np.flatnonzero(self.state))

    def finish(self, variant: str = "persistent") -> PebbleStats:
        if variant == "persistent":
            if not (self.count == 1 and self.state[self.g.root_index]):
                got = " ".join(sorted(self.config())) or "(empty)"
                raise PebblingError(f"final configuration is {{{got}}}, expected {{{self.g.root}}}")
        elif variant == "visiting":
            if self.count:
                got = " ".join(sorted(self.config()))
                raise PebblingError(f"final configuration is {{{got}}}, expected empty")
            if not self.visited:
                raise PebblingError(f"root never visited: {self.g.root} was never pebbled")
        else:
            raise ValueError(f"unknown variant {variant!r}")
        return PebbleStats(space=self.space, time=self.moves + 1)


def replay_stream(g: Dag, chunks: Iterable[np.ndarray], variant: str = "persistent") -> PebbleStats:
    """Validate an encoded move stream without materializing it."""
    r = Replayer(g)
    for chunk in chunks:
        r.feed(chunk)
    return r.finish(variant)


def apply_move(g: Dag, config: Iterable[str], mv: Move) -> frozenset[str]:
    config = frozenset(config)
    v = mv.node
    if v not in g:
        raise PebblingError(f"unknown node {v}", node=v)
    if mv.kind is MoveKind.PLACE and v in config:
        raise PebblingError(f"{v} is already pebbled", node=v)
    if mv.kind is MoveKind.REMOVE and v not in config:
        raise PebblingError(f"{v} is not pebbled", node=v)
    for u in g.in_neighbors(v):
        if u not in config:
            raise PebblingError(f"in-neighbour {u} of {v} is not pebbled", node=v)
    return config | {v} if mv.kind is MoveKind.PLACE else config - {v}


def validate_persistent(g: Dag, seq: Iterable[Move]) -> PebbleStats:
    return replay_stream(g, [encode(g, seq)], "persistent")


def validate_visiting(g: Dag, seq: Iterable[Move]) -> PebbleStats:
    return replay_stream(g, [encode(g, seq)], "visiting")


def reverse(seq: Iterable[Move]) -> PebbleSequence:
    return PebbleSequence(Move(m.kind.flipped(), m.node) for m in reversed(tuple(seq)))


def reverse_codes(codes: np.ndarray) -> np.ndarray:
    return -codes[::-1]


# -- reductions ----------------------------------------------------------------

def to_visiting_instance(t: RootedTree) -> tuple[RootedTree, int]:
    """Tree ``T'`` with ``rev(T) = vrev(T') + 1``; the second item is the budget shift ``-1``.

    Reroots at the lexicographically smallest leaf ``v`` and keeps the
    subtree under the unique child of ``v``.
    """
    if len(t) < 2:
        raise GraphError("visiting reduction needs at least two nodes")
    v = min(t.leaves())
    rerooted = reroot_at_leaf(t, v)
    (child,) = rerooted.children[v]
    return subtree(rerooted, child), -1


def to_persistent_instance(t: RootedTree) -> RootedTree:
    """``T`` plus a fresh root ``r'`` fed by the old root; ``rev(T') = vrev(T) + 1``."""
    fresh = t.root + "'"
    while fresh in t:
        fresh += "'"
    return RootedTree(list(t.edges) + [(t.root, fresh)], t.nodes)
