"""Explicit pebbling strategies for chains, complete binary trees and
bounded-degree trees, with measured space and time.

Sequences for chains and complete binary trees are self-similar: the
sequence for a subtree is the sequence for a smaller tree translated by an
offset in a local numbering (chain positions, or preorder for ``Bt_h``).
They are assembled from cached templates and streamed in chunks, so very
long sequences are validated without being held in memory.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .pebbling import PebbleSequence, PebbleStats, decode, replay_stream, write_codes
from .strategy import solve
from .treecore import (
    GraphError,
    RootedTree,
    _root_bound,
    chain,
    chain_plus_bt,
    complete_binary_tree,
)

TEMPLATE_CAP = 1 << 20
CHUNK = 1 << 16
DEFAULT_MAX_DEGREE = 4


@dataclass(frozen=True)
class GenReport:
    family: str
    tree: RootedTree = field(repr=False)
    space: int
    time: int
    params: dict
    _stream: Callable[[], Iterator[np.ndarray]] = field(repr=False, compare=False)

    @property
    def moves(self) -> int:
        return self.time - 1

    def chunks(self) -> Iterator[np.ndarray]:
        """Encoded moves (``+/-(node index + 1)``) in order."""
        return self._stream()

    def sequence(self) -> PebbleSequence:
        return decode(self.tree, np.concatenate(list(self.chunks()) or [np.zeros(0, np.int32)]))

    def write_moves(self, fh) -> None:
        write_codes(self.tree, self.chunks(), fh)

    def record(self) -> dict:
        return {"family": self.family, "params": self.params, "space": self.space, "time": self.time}


def _report(family: str, tree: RootedTree, params: dict, stream: Callable[[], Iterator[np.ndarray]]) -> GenReport:
    stats: PebbleStats = replay_stream(tree, stream(), "persistent")
    return GenReport(family, tree, stats.space, stats.time, params, stream)


# -- template grammar ------------------------------------------------------------

def _shift(arr: np.ndarray, offset: int, backwards: bool) -> np.ndarray:
    out = arr + np.where(arr > 0, offset, -offset).astype(arr.dtype) if offset else arr
    return -out[::-1] if backwards else out


class _Grammar:
    """A family of sequences, each a concatenation of parts.

    A part is either a raw array of local codes or ``(key, offset, backwards)``
    naming another sequence translated by ``offset``. Running a
    concatenation backwards reverses the part order and flips each part.
    """

    def __init__(self, cap: int = TEMPLATE_CAP):
        self.cap = cap
        self._sizes: dict = {}
        self._parts: dict = {}
        self._templates: dict = {}

    def build_parts(self, key) -> list:
        raise NotImplementedError

    def parts(self, key) -> list:
        if key not in self._parts:
            self._parts[key] = self.build_parts(key)
        return self._parts[key]

    def size(self, key) -> int:
        if key not in self._sizes:
            self._sizes[key] = sum(len(p) if isinstance(p, np.ndarray) else self.size(p[0]) for p in self.parts(key))
        return self._sizes[key]

    def template(self, key) -> np.ndarray:
        if key not in self._templates:
            self._templates[key] = np.concatenate(
                [p if isinstance(p, np.ndarray) else _shift(self.template(p[0]), p[1], p[2]) for p in self.parts(key)]
            )
        return self._templates[key]

    def emit(self, key, offset: int = 0, backwards: bool = False) -> Iterator[np.ndarray]:
        if self.size(key) <= self.cap:
            yield _shift(self.template(key), offset, backwards)
            return
        ps = self.parts(key)
        for p in reversed(ps) if backwards else ps:
            if isinstance(p, np.ndarray):
                yield _shift(p, offset, backwards)
            else:
                yield from self.emit(p[0], offset + p[1], p[2] ^ backwards)


def _lookup(lut: np.ndarray, a: np.ndarray) -> np.ndarray:
    return (np.sign(a) * lut[np.abs(a) - 1]).astype(np.int32)


def _stream(grammar: _Grammar, key, lut: np.ndarray) -> Callable[[], Iterator[np.ndarray]]:
    """Map local codes through ``lut`` (local position -> node index + 1), in chunks."""

    def run() -> Iterator[np.ndarray]:
        buf: list[np.ndarray] = []
        held = 0
        for arr in grammar.emit(key):
            buf.append(arr)
            held += len(arr)
            if held >= CHUNK:
                a = np.concatenate(buf) if len(buf) > 1 else buf[0]
                yield _lookup(lut, a)
                buf, held = [], 0
        if buf:
            a = np.concatenate(buf)
            yield _lookup(lut, a)

    return run


def _one() -> np.ndarray:
    return np.array([1], dtype=np.int32)


# -- chains ------------------------------------------------------------------------

class _ChainGrammar(_Grammar):
    # key: segment length L; local position 0 is the segment's source
    def build_parts(self, length: int) -> list:
        if length == 1:
            return [_one()]
        c = math.ceil(math.log2(length))
        upper = min(length - 1, 2 ** (c - 1))
        lower = length - upper
        return [(lower, 0, False), (upper, lower, False), (lower, 0, True)]


# shared so that segment templates are reused across chain lengths
_CHAINS = _ChainGrammar(cap=1 << 15)


def chain_pebbling(n: int) -> GenReport:
    """Midpoint recursion on ``Ch_n`` using ``ceil(log2 n) + 1`` pebbles.

    Pebble the lower segment, pebble the upper segment while holding its
    top, then undo the lower segment.
    """
    if n < 1:
        raise GraphError("n must be positive")
    tree = chain(n)
    lut = np.array([tree.index[str(n - p)] + 1 for p in range(n)], dtype=np.int32)
    return _report("chain", tree, {"n": n}, _stream(_CHAINS, n, lut))


# -- complete binary trees -----------------------------------------------------------

def _spine_offsets(h: int) -> list[int]:
    """Preorder offsets of ``right^i(root)`` in ``Bt_h`` for ``i = 0..h-1``."""
    out = [0]
    for i in range(1, h):
        out.append(out[-1] + 2 ** (h - i))
    return out


def _heap_to_preorder(h: int) -> dict[int, int]:
    pre = {1: 0}
    stack = [(1, 0, h)]
    while stack:
        x, p, m = stack.pop()
        if m > 1:
            pre[2 * x] = p + 1
            pre[2 * x + 1] = p + 2 ** (m - 1)
            stack.append((2 * x, p + 1, m - 1))
            stack.append((2 * x + 1, p + 2 ** (m - 1), m - 1))
    return pre


def _bt_lut(tree: RootedTree, h: int) -> np.ndarray:
    lut = np.zeros(2**h - 1, dtype=np.int32)
    for x, p in _heap_to_preorder(h).items():
        lut[p] = tree.index[str(x)] + 1
    return lut


def spine_length(h: int) -> int:
    """Number of held left subtrees before the residual ``Ch + Bt`` piece."""
    return max(0, h - math.ceil(math.log2(h))) if h > 1 else 0


class _SpineGrammar(_Grammar):
    def build_parts(self, h: int) -> list:
        if h == 1:
            return [_one()]
        s = spine_length(h)
        right = _spine_offsets(h)
        lefts = [(h - 1 - i, right[i] + 1) for i in range(s)]
        return (
            [(j, off, False) for j, off in lefts]
            + [self._residual(h, s, right)]
            + [(j, off, True) for j, off in reversed(lefts)]
        )

    @staticmethod
    def _residual(h: int, s: int, right: list[int]) -> np.ndarray:
        # the spine right^0..right^{s-1} feeding a Bt_{h-s} at right^s
        piece = chain_plus_bt(s, h - s)
        pos = {str(c): right[c - 1] for c in range(1, s + 1)}
        base = right[s] if s < h else None
        for x, p in _heap_to_preorder(h - s).items():
            pos[str(s + x)] = base + p
        codes = [pos[m.node] + 1 if m.kind.value == "+" else -(pos[m.node] + 1) for m in solve(piece).moves()]
        return np.asarray(codes, dtype=np.int32)


def bt_optimal_pebbling(h: int) -> GenReport:
    """Spine strategy for ``Bt_h``.

    Pebble ``left(right^i(root))`` for ``i < h - ceil(log2 h)`` (recursively,
    each held), pebble the remaining chain-plus-tree piece optimally, then
    undo the spine phase.
    """
    if h < 1:
        raise GraphError("h must be positive")
    tree = complete_binary_tree(h)
    return _report("bt", tree, {"h": h}, _stream(_SpineGrammar(), h, _bt_lut(tree, h)))


class _EpsilonGrammar(_Grammar):
    def __init__(self, k: int, cap: int = TEMPLATE_CAP):
        super().__init__(cap)
        self.k = k

    def build_parts(self, h: int) -> list:
        if h == 1:
            return [_one()]
        k = min(self.k, h - 1)
        right = _spine_offsets(h)
        step1 = [(h - 1 - i, right[i] + 1) for i in range(k)] + [(h - k, right[k])]
        # climb the spine to the root, then drop the intermediate spine pebbles
        step2 = [right[i] + 1 for i in reversed(range(k))] + [-(right[i] + 1) for i in range(1, k)]
        return (
            [(j, off, False) for j, off in step1]
            + [np.asarray(step2, dtype=np.int32)]
            + [(j, off, True) for j, off in reversed(step1)]
        )


def bt_epsilon_pebbling(h: int, k: int) -> GenReport:
    """Near-optimal pebbling of ``Bt_h`` in polynomially many steps.

    Holds ``k + 1`` recursively pebbled subtrees hanging off the top ``k``
    spine nodes, climbs to the root with ``k`` extra pebbles in ``2k - 1``
    moves, then undoes the subtrees. Heights ``h <= k`` use ``k = h - 1``.
    """
    if h < 1 or k < 1:
        raise GraphError("need h >= 1 and k >= 1")
    tree = complete_binary_tree(h)
    return _report("bt-eps", tree, {"h": h, "k": k}, _stream(_EpsilonGrammar(k), h, _bt_lut(tree, h)))


# -- arbitrary trees -------------------------------------------------------------------

def _postorder(tree: RootedTree, top: str, piece: set[str] | None) -> list[str]:
    out: list[str] = []
    stack = [(top, False)]
    while stack:
        v, done = stack.pop()
        if done:
            out.append(v)
            continue
        stack.append((v, True))
        for c in reversed(tree.children[v]):
            if piece is None or c in piece:
                stack.append((c, False))
    return out


def _bottom_up_codes(tree: RootedTree, top: str, piece: set[str] | None) -> np.ndarray:
    idx = [tree.index[v] + 1 for v in _postorder(tree, top, piece)]
    fwd = np.asarray(idx, dtype=np.int32)
    return np.concatenate([fwd, -fwd[-2::-1]])


def bottom_up_pebbling(tree: RootedTree) -> GenReport:
    """Pebble every node leaves-first, then remove all but the root in reverse."""
    codes = _bottom_up_codes(tree, tree.root, None)
    return _report("bottom-up", tree, {"n": len(tree)}, lambda: iter([codes]))


def partition_pieces(tree: RootedTree, top: str, piece: set[str], size: int) -> list[tuple[str, set[str]]]:
    """Split a connected piece into connected parts, children before parents.

    Greedy leaves-up clustering: a node closes a part once its open cluster
    reaches ``size`` nodes. Every part except the topmost has between
    ``size`` and ``1 + d * (size - 1)`` nodes (``d`` = max child count), so
    there are at most ``len(piece) / size + 1`` parts.
    """
    order = _postorder(tree, top, piece)
    open_size: dict[str, int] = {}
    roots = {top}
    for v in order:
        s = 1 + sum(open_size[c] for c in tree.children[v] if c in piece)
        if s >= size and v != top:
            roots.add(v)
            s = 0
        open_size[v] = s
    owner: dict[str, str] = {}
    members: dict[str, set[str]] = {r: set() for r in roots}
    for v in reversed(order):
        owner[v] = v if v in roots else owner[tree.parent[v]]
        members[owner[v]].add(v)
    # children-first order; ties go to the smaller part-root id
    waiting = {r: 0 for r in roots}
    for r in roots:
        if r != top:
            waiting[owner[tree.parent[r]]] += 1
    ready = [r for r in roots if waiting[r] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        r = heapq.heappop(ready)
        out.append((r, members[r]))
        if r != top:
            up = owner[tree.parent[r]]
            waiting[up] -= 1
            if waiting[up] == 0:
                heapq.heappush(ready, up)
    return out


def _separator_codes(tree: RootedTree, top: str, piece: set[str], k: int) -> np.ndarray:
    n = len(piece)
    if k == 1 or n == 1:
        return _bottom_up_codes(tree, top, piece)
    size = math.ceil(_root_bound(n, k))
    parts = partition_pieces(tree, top, piece, size)
    seqs = [_separator_codes(tree, r, members, k - 1) for r, members in parts]
    head = np.concatenate(seqs)
    if len(seqs) == 1:
        return head
    undo = np.concatenate(seqs[:-1])
    return np.concatenate([head, -undo[::-1]])


def separator_pebbling(tree: RootedTree, k: int, max_degree: int = DEFAULT_MAX_DEGREE) -> GenReport:
    """Divide-and-conquer pebbling with ``O(n^(1/k))`` pebbles and ``O(2^k n)`` moves.

    The tree is cut into about ``n^(1/k)`` connected parts of about
    ``n^((k-1)/k)`` nodes. Each part is pebbled recursively at level
    ``k - 1`` while the roots of earlier parts stay pebbled. Once the root is
    reached, everything before the last part is undone.
    """
    if k < 1:
        raise GraphError("k must be at least 1")
    deg = max(len(tree.children[v]) + (tree.parent[v] is not None) for v in tree.nodes)
    if deg > max_degree:
        raise GraphError(f"tree has degree {deg}, above the cap {max_degree}")
    codes = _separator_codes(tree, tree.root, set(tree.nodes), k)
    return _report("separator", tree, {"n": len(tree), "k": k, "max_degree": max_degree}, lambda: iter([codes]))
