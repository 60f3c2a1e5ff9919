"""Exhaustive ground truth for small graphs.

Configurations are bitmasks over the graph's sorted node order. The
pebbling oracles run breadth-first search over configurations bounded by a
pebble budget; the Dymond-Tompa oracle evaluates the pebbler/challenger game
by memoized minimax.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .pebbling import PebbleSequence, place, remove
from .treecore import Dag

PEBBLING_MAX_NODES = 20
STEPS_MAX_NODES = 16
DT_MAX_NODES = 12


class SizeCapExceeded(ValueError):
    pass


class Unreachable(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: PebbleSequence | None = None


def _cap(g: Dag, limit: int, what: str) -> None:
    if len(g) > limit:
        raise SizeCapExceeded(f"{what} is limited to {limit} nodes, graph has {len(g)}")


def _pred_masks(g: Dag) -> list[int]:
    return [sum(1 << j for j in p) for p in g.pred_indices]


def _bfs(g: Dag, budget: int, visiting: bool) -> PebbleSequence | None:
    """Shortest move sequence reaching the goal with at most ``budget`` pebbles."""
    n = len(g)
    need = _pred_masks(g)
    root_bit = 1 << g.root_index
    start = (0, False)
    goal = (0, True) if visiting else (root_bit, False)
    if start == goal:
        return PebbleSequence()
    parent: dict[tuple[int, bool], tuple[tuple[int, bool], int] | None] = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        mask, seen_root = state
        pop = mask.bit_count()
        for i in range(n):
            if need[i] & mask != need[i]:
                continue
            bit = 1 << i
            if mask & bit:
                nxt = (mask ^ bit, seen_root)
            else:
                if pop >= budget:
                    continue
                nxt = (mask | bit, seen_root or (visiting and bit == root_bit))
            if nxt in parent:
                continue
            parent[nxt] = (state, i)
            if nxt == goal:
                moves = []
                cur = nxt
                while parent[cur] is not None:
                    prev, j = parent[cur]
                    moves.append(place(g.nodes[j]) if cur[0] & (1 << j) else remove(g.nodes[j]))
                    cur = prev
                return PebbleSequence(reversed(moves))
            queue.append(nxt)
    return None


def _pebbling_number(g: Dag, visiting: bool) -> OracleResult:
    for k in range(1, len(g) + 1):
        witness = _bfs(g, k, visiting)
        if witness is not None:
            return OracleResult(k, witness)
    raise AssertionError("every DAG can be pebbled with n pebbles")


def rev_oracle(g: Dag) -> OracleResult:
    """Minimum pebbles for a persistent pebbling, with a shortest witness."""
    _cap(g, PEBBLING_MAX_NODES, "rev_oracle")
    return _pebbling_number(g, visiting=False)


def vrev_oracle(g: Dag) -> OracleResult:
    """Minimum pebbles for a visiting pebbling, with a shortest witness."""
    _cap(g, PEBBLING_MAX_NODES, "vrev_oracle")
    return _pebbling_number(g, visiting=True)


def min_steps_oracle(g: Dag, budget: int, variant: str = "persistent") -> OracleResult:
    """Fewest configurations (moves + 1) of a pebbling within ``budget`` pebbles."""
    _cap(g, STEPS_MAX_NODES, "min_steps_oracle")
    if variant not in ("persistent", "visiting"):
        raise ValueError(f"unknown variant {variant!r}")
    witness = _bfs(g, budget, variant == "visiting")
    if witness is None:
        raise Unreachable(f"no {variant} pebbling with {budget} pebbles")
    return OracleResult(len(witness) + 1, witness)


def _effective_mask(g: Dag, mask: int, c: int) -> int:
    out = 0
    stack = [c]
    preds = g.pred_indices
    while stack:
        for y in preds[stack.pop()]:
            bit = 1 << y
            if not (mask | out) & bit:
                out |= bit
                stack.append(y)
    return out


def effective_predecessors(g: Dag, config: Iterable[str], challenged: str) -> frozenset[str]:
    """Nodes with a pebble-free directed path into ``challenged``."""
    mask = sum(1 << g.index[v] for v in config)
    eff = _effective_mask(g, mask, g.index[challenged])
    return frozenset(g.nodes[i] for i in range(len(g)) if eff >> i & 1)


class DTGame:
    """Memoized Dymond-Tompa game on ``g``.

    A position is (pebbled mask, challenged node). The pebbler wins once the
    challenged node has all in-neighbours pebbled; the value is the pebble
    count at that point.
    """

    def __init__(self, g: Dag, prune: bool = True):
        _cap(g, DT_MAX_NODES, "dt_oracle")
        self.g = g
        self.prune = prune
        self._need = _pred_masks(g)
        self._all = (1 << len(g)) - 1
        self.value = lru_cache(maxsize=None)(self._value)

    def candidates(self, mask: int, c: int) -> list[int]:
        allowed = _effective_mask(self.g, mask, c) if self.prune else self._all & ~mask
        return [i for i in range(len(self.g)) if allowed >> i & 1]

    def _value(self, mask: int, c: int) -> int:
        if self._need[c] & mask == self._need[c]:
            return bin(mask).count("1")
        best = None
        for u in self.candidates(mask, c):
            m2 = mask | 1 << u
            v = max(self.value(m2, u), self.value(m2, c))
            if best is None or v < best:
                best = v
        return best

    def best_move(self, mask: int, c: int) -> int:
        """Lowest-index pebbler move achieving the position's value."""
        target = self.value(mask, c)
        for u in self.candidates(mask, c):
            m2 = mask | 1 << u
            if max(self.value(m2, u), self.value(m2, c)) == target:
                return u
        raise AssertionError("no move attains the value")

    def start(self) -> tuple[int, int]:
        r = self.g.root_index
        return 1 << r, r


def dt_oracle(g: Dag, prune: bool = True) -> int:
    """Dymond-Tompa pebble number; ``prune`` restricts the pebbler to effective predecessors."""
    game = DTGame(g, prune)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * len(g) + 100))
    try:
        return game.value(*game.start())
    finally:
        sys.setrecursionlimit(limit)
