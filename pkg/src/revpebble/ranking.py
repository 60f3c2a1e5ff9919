"""Edge rank colorings and the matching (contraction) game on undirected trees.

An edge coloring maps sorted edge pairs to positive ints. It is a rank
coloring when any two edges of equal color ``i`` are separated by an edge of
color ``> i``. A matching sequence lists, per round, the original edges
contracted in that round.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .treecore import Edge, GraphError, UndirectedTree, iter_tree_edges_bfs, uedge

EdgeColoring = dict[Edge, int]
MatchingSequence = list[frozenset[Edge]]

BRUTEFORCE_MAX_EDGES = 14


class RankingError(ValueError):
    """An invalid coloring or matching sequence. ``witness`` holds diagnostic detail."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def rank_of(coloring: Mapping[Edge, int]) -> int:
    return max(coloring.values(), default=0)


def _normalize(tree: UndirectedTree, coloring: Mapping[tuple[str, str], int]) -> EdgeColoring:
    out: EdgeColoring = {}
    for (a, b), c in coloring.items():
        e = uedge(a, b)
        if e not in tree.edges:
            raise RankingError(f"{a}-{b} is not an edge of the tree")
        if not isinstance(c, int) or c < 1:
            raise RankingError(f"color of {a}-{b} must be a positive int, got {c!r}")
        out[e] = c
    missing = tree.edges - out.keys()
    if missing:
        a, b = min(missing)
        raise RankingError(f"edge {a}-{b} has no color")
    return out


def validate_coloring(tree: UndirectedTree, coloring: Mapping[tuple[str, str], int]) -> int:
    """Check the rank condition; return the largest color used.

    For each edge, walks outward through strictly smaller colors; meeting an
    edge of the same color is a violation.
    """
    col = _normalize(tree, coloring)
    for e, c in sorted(col.items()):
        # BFS over nodes reachable from e via edges colored < c
        prev: dict[str, str | None] = {e[0]: None, e[1]: None}
        queue = deque(e)
        while queue:
            x = queue.popleft()
            for y in tree.adj[x]:
                f = uedge(x, y)
                if f == e or y in prev:
                    continue
                if col[f] == c:
                    path = []
                    z = x
                    while prev[z] is not None:
                        path.append(uedge(z, prev[z]))
                        z = prev[z]
                    path.reverse()
                    raise RankingError(
                        f"edges {e[0]}-{e[1]} and {f[0]}-{f[1]} share color {c} "
                        f"with no larger color between them",
                        witness=(e, f, path),
                    )
                if col[f] < c:
                    prev[y] = x
                    queue.append(y)
    return rank_of(col)


# -- exact solver ----------------------------------------------------------------

def _combine(child_lists: Sequence[frozenset[int]]) -> tuple[list[int], int]:
    """Choose ranks for the edges to each child so that the union of visible
    rank sets is minimal when read as a binary number.

    Branch ``i`` with rank ``r`` exposes ``{r} | {c in L_i : c > r}``; branches
    must expose disjoint sets and ``r`` must not be in ``L_i``.
    Returns (ranks per child, union bitmask with rank ``p`` at bit ``p-1``).
    """
    groups = sorted(set(child_lists), key=lambda s: sorted(s, reverse=True))
    gidx = {g: i for i, g in enumerate(groups)}
    counts0 = [0] * len(groups)
    for lst in child_lists:
        counts0[gidx[lst]] += 1
    top = max((max(g) for g in groups if g), default=0) + len(child_lists)

    @lru_cache(maxsize=None)
    def best(p: int, counts: tuple[int, ...]):
        open_n = sum(counts)
        if open_n == 0:
            return 0, None
        if p == 0 or open_n > p:
            return None
        busy = [g for g, k in enumerate(counts) if k and p in groups[g]]
        n_busy = sum(counts[g] for g in busy)
        if n_busy >= 2:
            return None
        sub = best(p - 1, counts)
        if n_busy == 1:
            return None if sub is None else ((1 << (p - 1)) | sub[0], None)
        if sub is not None:
            return sub[0], None
        choice = None
        for g, k in enumerate(counts):
            if not k:
                continue
            nxt = list(counts)
            nxt[g] -= 1
            sub = best(p - 1, tuple(nxt))
            if sub is not None and (choice is None or sub[0] < choice[0]):
                choice = (sub[0], g)
        if choice is None:
            return None
        return (1 << (p - 1)) | choice[0], choice[1]

    counts = tuple(counts0)
    res = best(top, counts)
    assert res is not None
    union = res[0]
    # walk decisions to assign closing ranks per group
    closed: list[list[int]] = [[] for _ in groups]
    p = top
    while sum(counts):
        _, g = best(p, counts)
        if g is not None:
            closed[g].append(p)
            nxt = list(counts)
            nxt[g] -= 1
            counts = tuple(nxt)
        p -= 1
    best.cache_clear()
    ranks = []
    cursor = [0] * len(groups)
    for lst in child_lists:
        g = gidx[lst]
        ranks.append(closed[g][cursor[g]])
        cursor[g] += 1
    return ranks, union


def erank_opt(tree: UndirectedTree) -> EdgeColoring:
    """An optimal edge rank coloring with colors ``1..erank``.

    Bottom-up over the tree rooted at its smallest node; each subtree keeps the
    binary-minimal set of ranks visible from its top, which dominates every
    other achievable set.
    """
    if len(tree) == 1:
        return {}
    root = tree.nodes[0]
    parent: dict[str, str | None] = {root: None}
    order = [root]
    for x in order:
        for y in tree.adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    children: dict[str, list[str]] = {x: [] for x in order}
    for x in order[1:]:
        children[parent[x]].append(x)

    visible: dict[str, frozenset[int]] = {}
    raw: EdgeColoring = {}
    for v in reversed(order):
        kids = children[v]
        if not kids:
            visible[v] = frozenset()
            continue
        ranks, union = _combine([visible[c] for c in kids])
        for c, r in zip(kids, ranks):
            raw[uedge(c, v)] = r
        visible[v] = frozenset(i + 1 for i in range(union.bit_length()) if union >> i & 1)
        for c in kids:
            del visible[c]
    # drop unused ranks; an order-preserving relabel keeps the rank condition
    used = sorted(set(raw.values()))
    relabel = {c: i + 1 for i, c in enumerate(used)}
    return {e: relabel[c] for e, c in sorted(raw.items())}


def erank(tree: UndirectedTree) -> int:
    return rank_of(erank_opt(tree))


def _twin_predecessors(tree: UndirectedTree, root: str, edges: list[Edge]) -> list[int]:
    """For each edge to a child, the previous sibling edge whose subtree is isomorphic, or -1.

    Swapping isomorphic sibling subtrees maps rank colorings to rank
    colorings, so twin edges may be required to take increasing colors.
    """
    parent: dict[str, str | None] = {root: None}
    order = [root]
    for x in order:
        for y in tree.adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    shape: dict[str, str] = {}
    for x in reversed(order):
        shape[x] = "(" + "".join(sorted(shape[y] for y in tree.adj[x] if parent.get(y) == x and y != root)) + ")"
    last: dict[tuple[str, str], int] = {}
    out = []
    for i, (a, b) in enumerate(edges):
        child = b if parent[b] == a else a
        key = (parent[child], shape[child])
        out.append(last.get(key, -1))
        last[key] = i
    return out


def erank_bruteforce(tree: UndirectedTree, k: int) -> bool:
    """Whether a rank coloring with colors ``<= k`` exists, by exhaustive backtracking."""
    m = len(tree.edges)
    if m > BRUTEFORCE_MAX_EDGES:
        raise ValueError(f"erank_bruteforce is capped at {BRUTEFORCE_MAX_EDGES} edges, got {m}")
    if m == 0:
        return True
    if k < 1:
        return False
    root = tree.nodes[0]
    edges = list(iter_tree_edges_bfs(tree, root))
    pos = {e: i for i, e in enumerate(edges)}
    # edges strictly between e_i and e_j (j < i); all are earlier than i in BFS order
    between: list[list[list[int]]] = []
    for i, e in enumerate(edges):
        row = []
        for j in range(i):
            f = edges[j]
            best_path = None
            for a in e:
                for b in f:
                    p = tree.path_edges(a, b)
                    if best_path is None or len(p) < len(best_path):
                        best_path = p
            row.append([pos[g] for g in best_path if g != e and g != f])
        between.append(row)
    twin = _twin_predecessors(tree, root, edges)

    color = [0] * m

    def ok(i: int, c: int) -> bool:
        if twin[i] >= 0 and c <= color[twin[i]]:
            return False
        for j in range(i):
            if color[j] == c and not any(color[g] > c for g in between[i][j]):
                return False
        return True

    def go(i: int) -> bool:
        if i == m:
            return True
        for c in range(1, k + 1):
            if ok(i, c):
                color[i] = c
                if go(i + 1):
                    return True
        color[i] = 0
        return False

    return go(0)


# -- contraction game ----------------------------------------------------------

class ContractionState:
    """Partition of the original nodes into contracted classes (union-find)."""

    __slots__ = ("_parent",)

    def __init__(self, nodes: Iterable[str] = (), _parent: dict[str, str] | None = None):
        self._parent = dict(_parent) if _parent is not None else {v: v for v in nodes}

    def find(self, v: str) -> str:
        p = self._parent
        root = v
        while p[root] != root:
            root = p[root]
        while p[v] != root:
            p[v], v = root, p[v]
        return root

    def classes(self) -> int:
        return sum(1 for v in self._parent if self.find(v) == v)

    def live(self, e: Edge) -> bool:
        return self.find(e[0]) != self.find(e[1])


def contract(state: ContractionState, tree: UndirectedTree, matching: Iterable[tuple[str, str]]) -> ContractionState:
    """Contract a matching of the current quotient tree; returns a new state."""
    new = ContractionState(_parent=state._parent)
    touched: dict[str, Edge] = {}
    edges = sorted(uedge(a, b) for a, b in matching)
    for e in edges:
        if e not in tree.edges:
            raise RankingError(f"{e[0]}-{e[1]} is not an edge of the tree")
        if not state.live(e):
            raise RankingError(f"edge {e[0]}-{e[1]} is already contracted", witness=e)
        for end in e:
            cls = state.find(end)
            if cls in touched:
                f = touched[cls]
                raise RankingError(
                    f"edges {f[0]}-{f[1]} and {e[0]}-{e[1]} share a node of the current tree",
                    witness=(f, e),
                )
            touched[cls] = e
    for a, b in edges:
        ra, rb = new.find(a), new.find(b)
        new._parent[max(ra, rb)] = min(ra, rb)
    return new


def validate_matchings(tree: UndirectedTree, seq: Sequence[Iterable[tuple[str, str]]]) -> int:
    """Replay the contraction rounds; return their number if they end in one node."""
    state = ContractionState(tree.nodes)
    for i, step in enumerate(seq):
        try:
            state = contract(state, tree, step)
        except RankingError as exc:
            raise RankingError(f"step {i + 1}: {exc}", exc.witness) from None
    if state.classes() != 1:
        raise RankingError(f"did not reach a single node: {state.classes()} nodes remain")
    return len(seq)


def coloring_to_matchings(tree: UndirectedTree, coloring: Mapping[tuple[str, str], int]) -> MatchingSequence:
    """Round ``i`` contracts every edge colored ``i``."""
    col = _normalize(tree, coloring)
    k = validate_coloring(tree, col)
    return [frozenset(e for e, c in col.items() if c == i) for i in range(1, k + 1)]


def matchings_to_coloring(tree: UndirectedTree, seq: Sequence[Iterable[tuple[str, str]]]) -> EdgeColoring:
    """Color each edge by the round in which it is contracted."""
    validate_matchings(tree, seq)
    return {uedge(a, b): i for i, step in enumerate(seq, 1) for a, b in step}


# -- text formats ----------------------------------------------------------------

def format_coloring(coloring: Mapping[Edge, int]) -> str:
    return "".join(f"{a} {b} {c}\n" for (a, b), c in sorted(coloring.items()))


def parse_coloring(text: str | bytes) -> EdgeColoring:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    out: EdgeColoring = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise RankingError(f"line {lineno}: expected 'u v color', got {line!r}")
        try:
            c = int(parts[2])
        except ValueError:
            raise RankingError(f"line {lineno}: color {parts[2]!r} is not an integer") from None
        out[uedge(parts[0], parts[1])] = c
    return out


def format_matchings(seq: Sequence[Iterable[Edge]]) -> str:
    return "".join(" ".join(f"{a}-{b}" for a, b in sorted(step)) + "\n" for step in seq)


def _split_edge_token(tree: UndirectedTree, tok: str) -> Edge:
    # node ids may themselves contain '-', so try every split point
    hits = {
        uedge(tok[:i], tok[i + 1:])
        for i, ch in enumerate(tok)
        if ch == "-" and uedge(tok[:i], tok[i + 1:]) in tree.edges
    }
    if len(hits) != 1:
        raise RankingError(f"cannot resolve edge token {tok!r}")
    return hits.pop()


def parse_matchings(text: str | bytes, tree: UndirectedTree) -> MatchingSequence:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()
    return [frozenset(_split_edge_token(tree, tok) for tok in line.split()) for line in lines if not line.startswith("#")]


def as_undirected(edges: Iterable[tuple[str, str]], nodes: Iterable[str] = ()) -> UndirectedTree:
    try:
        return UndirectedTree(edges, nodes)
    except GraphError as exc:
        raise RankingError(str(exc)) from None
