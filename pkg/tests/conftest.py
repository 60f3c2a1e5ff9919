from __future__ import annotations

from pathlib import Path
from typing import Iterator

import networkx as nx
import pytest
from hypothesis import strategies as st

from revpebble.treecore import RootedTree, UndirectedTree, parse_graph, random_tree, read_graph

DATA = Path(__file__).parent / "data"


def free_trees(n: int) -> Iterator[UndirectedTree]:
    """All unlabeled trees on ``n`` nodes, labelled ``0..n-1``."""
    if n == 1:
        yield UndirectedTree([], ["0"])
        return
    for g in nx.nonisomorphic_trees(n):
        yield UndirectedTree([(str(a), str(b)) for a, b in g.edges()], [str(v) for v in g.nodes()])


def rooted_trees(n: int) -> Iterator[RootedTree]:
    """Every rooting of every free tree on ``n`` nodes."""
    for u in free_trees(n):
        for r in u.nodes:
            yield u.rooted_at(r)


@st.composite
def trees(draw, min_nodes: int = 1, max_nodes: int = 12, max_degree: int | None = None) -> RootedTree:
    n = draw(st.integers(min_nodes, max_nodes))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_tree(n, seed, max_degree)


@pytest.fixture
def bt3() -> RootedTree:
    return read_graph(str(DATA / "bt3.tree"))


@pytest.fixture
def g1():
    return read_graph(str(DATA / "g1.dag"))


@pytest.fixture
def g2():
    return read_graph(str(DATA / "g2.dag"))


def text_of(name: str) -> str:
    return (DATA / name).read_text()


def two_chain() -> RootedTree:
    return parse_graph("u r\n")


def random_dag(n: int, seed: int, p: float = 0.4):
    """Random DAG on ``0..n-1`` with sink ``0``: node ``i`` feeds at least one ``j < i``."""
    import random

    from revpebble.treecore import Dag

    rng = random.Random(seed)
    edges = []
    for i in range(1, n):
        outs = {j for j in range(i) if rng.random() < p} or {rng.randrange(i)}
        edges += [(str(i), str(j)) for j in sorted(outs)]
    return Dag(edges, [str(i) for i in range(n)])


@st.composite
def dags(draw, max_nodes: int = 7):
    return random_dag(draw(st.integers(1, max_nodes)), draw(st.integers(0, 2**32 - 1)))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[num])
