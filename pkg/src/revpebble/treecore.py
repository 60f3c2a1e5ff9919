"""Rooted directed trees, DAGs and undirected trees.

Edges point from child to parent, so the root is the unique sink of the
graph. Node ids are non-empty tokens without whitespace. All graph objects
are immutable once built.
"""

from __future__ import annotations

import math
import random
import re
from collections import deque
from typing import Iterable, Iterator

Edge = tuple[str, str]


class GraphError(ValueError):
    """Raised for malformed graph input or a violated structural precondition."""


_TOKEN = re.compile(r"\S+")


def _check_token(v: str) -> str:
    if not isinstance(v, str) or not _TOKEN.fullmatch(v) or not v.isprintable():
        raise GraphError(f"invalid node id {v!r}")
    return v


class Dag:
    """A DAG with a unique sink ``root`` that is reachable from every node."""

    __slots__ = ("nodes", "edges", "root", "index", "_preds", "_succs")

    def __init__(self, edges: Iterable[Edge], nodes: Iterable[str] = (), root: str | None = None):
        edge_list = [(u, v) for u, v in edges]
        edge_set = frozenset(edge_list)
        if len(edge_set) != len(edge_list):
            seen: set[Edge] = set()
            for e in edge_list:
                if e in seen:
                    raise GraphError(f"duplicate edge {e[0]} {e[1]}")
                seen.add(e)
        node_set = set(nodes)
        for u, v in edge_set:
            if u == v:
                raise GraphError(f"cycle detected: self-loop on {_check_token(u)}")
            node_set.add(u)
            node_set.add(v)
        for v in node_set:
            _check_token(v)
        if not node_set:
            raise GraphError("empty graph")

        self.nodes: tuple[str, ...] = tuple(sorted(node_set))
        self.index: dict[str, int] = {v: i for i, v in enumerate(self.nodes)}
        preds: list[list[int]] = [[] for _ in self.nodes]
        succs: list[list[int]] = [[] for _ in self.nodes]
        for u, v in sorted(edge_set):
            preds[self.index[v]].append(self.index[u])
            succs[self.index[u]].append(self.index[v])
        self._preds = tuple(tuple(p) for p in preds)
        self._succs = tuple(tuple(s) for s in succs)
        self.edges: frozenset[Edge] = edge_set

        sinks = [self.nodes[i] for i, s in enumerate(self._succs) if not s]
        self._check_acyclic()
        if len(sinks) != 1:
            raise GraphError(f"expected exactly one sink, found {len(sinks)}: {' '.join(sinks[:5])}")
        if root is not None and root != sinks[0]:
            raise GraphError(f"declared root {root} is not the unique sink {sinks[0]}")
        self.root: str = sinks[0]
        self._check_reaches_root()

    def _check_acyclic(self) -> None:
        indeg = [len(p) for p in self._preds]
        queue = deque(i for i, d in enumerate(indeg) if d == 0)
        done = 0
        while queue:
            i = queue.popleft()
            done += 1
            for j in self._succs[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    queue.append(j)
        if done != len(self.nodes):
            raise GraphError("cycle detected")

    def _check_reaches_root(self) -> None:
        r = self.index[self.root]
        seen = {r}
        stack = [r]
        while stack:
            for p in self._preds[stack.pop()]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        if len(seen) != len(self.nodes):
            missing = sorted(self.nodes[i] for i in range(len(self.nodes)) if i not in seen)
            raise GraphError(f"disconnected: no path to root from {' '.join(missing[:5])}")

    # -- queries ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v: object) -> bool:
        return v in self.index

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Dag)
            and type(self) is type(other)
            and self.nodes == other.nodes
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={len(self.nodes)}, root={self.root!r})"

    def in_neighbors(self, v: str) -> tuple[str, ...]:
        return tuple(self.nodes[i] for i in self._preds[self.index[v]])

    def out_neighbors(self, v: str) -> tuple[str, ...]:
        return tuple(self.nodes[i] for i in self._succs[self.index[v]])

    @property
    def pred_indices(self) -> tuple[tuple[int, ...], ...]:
        return self._preds

    @property
    def root_index(self) -> int:
        return self.index[self.root]

    def sources(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.nodes) if not self._preds[i])


class RootedTree(Dag):
    """A rooted directed tree: every non-root node has exactly one out-edge."""

    __slots__ = ("parent", "children")

    def __init__(self, edges: Iterable[Edge], nodes: Iterable[str] = (), root: str | None = None):
        super().__init__(edges, nodes, root)
        for i, s in enumerate(self._succs):
            if len(s) > 1:
                raise GraphError(f"node {self.nodes[i]} has out-degree {len(s)}; not a tree")
        self.parent: dict[str, str | None] = {v: None for v in self.nodes}
        for u, v in self.edges:
            self.parent[u] = v
        names = self.nodes
        self.children: dict[str, tuple[str, ...]] = {
            v: tuple(names[j] for j in p) if p else () for v, p in zip(names, self._preds)
        }

    @classmethod
    def from_dag(cls, g: Dag) -> "RootedTree":
        return cls(g.edges, g.nodes)

    def leaves(self) -> tuple[str, ...]:
        return self.sources()

    def postorder(self, top: str | None = None) -> list[str]:
        """Nodes of the subtree under ``top`` (default: root), children before parents."""
        top = self.root if top is None else top
        out: list[str] = []
        stack: list[tuple[str, bool]] = [(top, False)]
        while stack:
            v, expanded = stack.pop()
            if expanded:
                out.append(v)
                continue
            stack.append((v, True))
            for c in reversed(self.children[v]):
                stack.append((c, False))
        return out

    def descendants(self, u: str) -> set[str]:
        out = {u}
        stack = [u]
        while stack:
            for c in self.children[stack.pop()]:
                out.add(c)
                stack.append(c)
        return out

    def induced(self, keep: Iterable[str]) -> "RootedTree":
        """The rooted tree on a connected node subset (rooted at its topmost node)."""
        keep = set(keep)
        edges = [(u, v) for u, v in self.edges if u in keep and v in keep]
        return RootedTree(edges, keep)


class UndirectedTree:
    """An undirected tree; edges are stored as sorted pairs ``(a, b)`` with ``a < b``."""

    __slots__ = ("nodes", "edges", "adj")

    def __init__(self, edges: Iterable[tuple[str, str]], nodes: Iterable[str] = ()):
        node_set = {_check_token(v) for v in nodes}
        es: set[Edge] = set()
        for u, v in edges:
            _check_token(u)
            _check_token(v)
            if u == v:
                raise GraphError(f"self-loop on {u}")
            e = uedge(u, v)
            if e in es:
                raise GraphError(f"duplicate edge {e[0]} {e[1]}")
            es.add(e)
            node_set.update(e)
        if not node_set:
            raise GraphError("empty graph")
        self.nodes: tuple[str, ...] = tuple(sorted(node_set))
        self.edges: frozenset[Edge] = frozenset(es)
        adj: dict[str, list[str]] = {v: [] for v in self.nodes}
        for a, b in sorted(es):
            adj[a].append(b)
            adj[b].append(a)
        self.adj: dict[str, tuple[str, ...]] = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        if len(es) != len(self.nodes) - 1 or len(self._reach(self.nodes[0])) != len(self.nodes):
            raise GraphError("not a tree (must be connected and acyclic)")

    def _reach(self, start: str, within: set[str] | None = None) -> set[str]:
        seen = {start}
        stack = [start]
        while stack:
            for w in self.adj[stack.pop()]:
                if w not in seen and (within is None or w in within):
                    seen.add(w)
                    stack.append(w)
        return seen

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UndirectedTree) and self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges))

    def __repr__(self) -> str:
        return f"UndirectedTree(n={len(self.nodes)})"

    def degree(self, v: str) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max(len(a) for a in self.adj.values())

    def path_edges(self, a: str, b: str) -> list[Edge]:
        """Edges on the unique path from node ``a`` to node ``b``."""
        prev: dict[str, str | None] = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                break
            for y in self.adj[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        out = []
        x = b
        while prev[x] is not None:
            out.append(uedge(x, prev[x]))
            x = prev[x]
        return out[::-1]

    def rooted_at(self, r: str) -> RootedTree:
        """Orient every edge toward ``r``."""
        edges = []
        parent = {r: None}
        stack = [r]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in parent:
                    parent[y] = x
                    edges.append((y, x))
                    stack.append(y)
        return RootedTree(edges, self.nodes)


def uedge(u: str, v: str) -> Edge:
    return (u, v) if u < v else (v, u)


# -- text format -----------------------------------------------------------

def parse_graph(text: str | bytes) -> RootedTree | Dag:
    """Parse an edge list: one ``u v`` per line meaning ``u -> v``.

    Blank lines and ``#`` comments are skipped; a line with a single token
    declares an isolated node. Returns a :class:`RootedTree` when every
    non-root node has out-degree one, otherwise a :class:`Dag`.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    edges: list[Edge] = []
    nodes: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 1:
            nodes.append(parts[0])
        elif len(parts) == 2:
            edges.append((parts[0], parts[1]))
        else:
            raise GraphError(f"line {lineno}: expected 'u v' or 'v', got {line!r}")
    g = Dag(edges, nodes)
    if all(len(s) <= 1 for s in g._succs):
        return RootedTree(edges, nodes)
    return g


def serialize(g: Dag) -> str:
    """Deterministic edge-list text; round-trips through :func:`parse_graph`."""
    if not g.edges:
        return "".join(f"{v}\n" for v in g.nodes)
    return "".join(f"{u} {v}\n" for u, v in sorted(g.edges))


def read_graph(path: str) -> RootedTree | Dag:
    with open(path, "rb") as fh:
        return parse_graph(fh.read())


def read_tree(path: str) -> RootedTree:
    g = read_graph(path)
    if not isinstance(g, RootedTree):
        raise GraphError(f"{path}: graph is a DAG, not a rooted tree")
    return g


# -- structural operations -------------------------------------------------

def underlying(t: RootedTree) -> UndirectedTree:
    return UndirectedTree(t.edges, t.nodes)


def subtree(t: RootedTree, u: str) -> RootedTree:
    if u not in t:
        raise GraphError(f"unknown node {u}")
    if u == t.root:
        return t
    return t.induced(t.descendants(u))


def split(t: RootedTree, e: Edge) -> tuple[RootedTree, RootedTree]:
    """Cut edge ``e = (u, v)``: returns ``(T_u, T minus T_u)``."""
    if tuple(e) not in t.edges:
        raise GraphError(f"unknown edge {e[0]} {e[1]}")
    below = t.descendants(e[0])
    rest = [v for v in t.nodes if v not in below]
    return t.induced(below), t.induced(rest)


def height(t: RootedTree) -> int:
    """Number of nodes on the longest root-to-leaf path."""
    depth = {t.root: 1}
    best = 1
    stack = [t.root]
    while stack:
        v = stack.pop()
        for c in t.children[v]:
            depth[c] = depth[v] + 1
            best = max(best, depth[c])
            stack.append(c)
    return best


def reroot_at_leaf(t: RootedTree, v: str) -> RootedTree:
    if v not in t:
        raise GraphError(f"unknown node {v}")
    if t.children[v]:
        raise GraphError(f"{v} is not a leaf")
    return underlying(t).rooted_at(v)


# -- families ----------------------------------------------------------------

def complete_binary_tree(h: int) -> RootedTree:
    """``Bt_h`` with heap labels: root ``1``, children of ``i`` are ``2i`` and ``2i+1``."""
    if h < 1:
        raise GraphError("height must be positive")
    n = 2**h - 1
    return RootedTree(((str(i), str(i // 2)) for i in range(2, n + 1)), ["1"])


def chain(n: int) -> RootedTree:
    """``Ch_n``: nodes ``1..n`` with edges ``i+1 -> i``; root ``1``, source ``n``."""
    if n < 1:
        raise GraphError("chain length must be positive")
    return RootedTree(((str(i + 1), str(i)) for i in range(1, n)), ["1"])


def chain_plus_bt(i: int, h: int) -> RootedTree:
    """``Ch_i + Bt_h``: chain ``1..i`` (root ``1``) fed by a ``Bt_h`` whose heap label ``j`` is ``i+j``."""
    if i < 0 or h < 1:
        raise GraphError("need i >= 0 and h >= 1")
    edges = [(str(j + 1), str(j)) for j in range(1, i)]
    edges += [(str(i + j), str(i + j // 2)) for j in range(2, 2**h)]
    if i > 0:
        edges.append((str(i + 1), str(i)))
    return RootedTree(edges, [str(i + 1)])


def random_tree(n: int, rng: random.Random | int | None = None, max_degree: int | None = None) -> RootedTree:
    """Random rooted tree on nodes ``0..n-1`` (root ``0``) built by random attachment.

    With ``max_degree`` set, no node of the underlying tree exceeds that degree.
    """
    if n < 1:
        raise GraphError("n must be positive")
    if max_degree is not None and max_degree < 2 and n > 2:
        raise GraphError("max_degree must be at least 2 for n > 2")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    deg = [0] * n
    open_nodes = [0]
    pos = {0: 0}
    edges = []
    for v in range(1, n):
        j = rng.randrange(len(open_nodes))
        p = open_nodes[j]
        edges.append((str(v), str(p)))
        deg[p] += 1
        deg[v] = 1
        if max_degree is not None and deg[p] >= max_degree:
            last = open_nodes.pop()
            if last != p:
                open_nodes[pos[p]] = last
                pos[last] = pos[p]
            del pos[p]
        if max_degree is None or deg[v] < max_degree:
            pos[v] = len(open_nodes)
            open_nodes.append(v)
    return RootedTree(edges, ["0"])


# -- separator ---------------------------------------------------------------

def _root_bound(n: int, k0: int) -> float:
    """``n ** ((k0 - 1) / k0)``, snapped to an integer when it is one."""
    b = n ** ((k0 - 1) / k0)
    r = round(b)
    if r**k0 == n ** (k0 - 1):
        return float(r)
    return b


def _best_edge_split(tree: UndirectedTree, part: set[str]) -> tuple[set[str], set[str]]:
    """Most balanced edge cut of the connected node set ``part``; returns (larger, smaller)."""
    start = min(part)
    parent = {start: None}
    order = [start]
    for x in order:
        for y in tree.adj[x]:
            if y in part and y not in parent:
                parent[y] = x
                order.append(y)
    size = {x: 1 for x in order}
    for x in reversed(order[1:]):
        size[parent[x]] += size[x]
    total = len(part)
    best = None
    for x in order[1:]:
        key = (-min(size[x], total - size[x]), uedge(x, parent[x]))
        if best is None or key < best[0]:
            best = (key, x)
    cut = best[1]
    below = set()
    stack = [cut]
    while stack:
        x = stack.pop()
        below.add(x)
        for y in tree.adj[x]:
            if y in part and y != parent[x] and y not in below:
                stack.append(y)
    above = part - below
    return (below, above) if len(below) >= len(above) else (above, below)


def separator_subtree(tree: UndirectedTree, n: int, k0: int) -> frozenset[str]:
    """Connected node set with size in ``[floor(b/2), ceil(b)]`` where ``b = n**((k0-1)/k0)``.

    Repeatedly cuts the current part at its most balanced edge and keeps the
    larger side.
    """
    if k0 < 1 or n < 1:
        raise GraphError("need n >= 1 and k0 >= 1")
    b = _root_bound(n, k0)
    if len(tree) <= b:
        raise GraphError(f"tree has {len(tree)} nodes; separator needs more than {b:g}")
    hi = math.ceil(b)
    part = set(tree.nodes)
    while len(part) > hi:
        part, _ = _best_edge_split(tree, part)
    assert math.floor(b / 2) <= len(part) <= hi
    return frozenset(part)


def iter_tree_edges_bfs(tree: UndirectedTree, start: str | None = None) -> Iterator[Edge]:
    """Edges in BFS order from ``start``; each edge touches an earlier one."""
    start = tree.nodes[0] if start is None else start
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in tree.adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
                yield uedge(x, y)
