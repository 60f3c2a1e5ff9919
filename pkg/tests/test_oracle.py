import pytest
from hypothesis import given, settings

from conftest import dags, trees, two_chain
from revpebble.oracle import (
    DTGame,
    SizeCapExceeded,
    Unreachable,
    dt_oracle,
    effective_predecessors,
    min_steps_oracle,
    rev_oracle,
    vrev_oracle,
)
from revpebble.pebbling import validate_persistent, validate_visiting
from revpebble.treecore import chain, complete_binary_tree, parse_graph, random_tree

SINGLE = parse_graph("r\n")


def test_pebbling_numbers(g1, g2, bt3):
    assert rev_oracle(SINGLE).value == 1 and vrev_oracle(SINGLE).value == 1
    assert rev_oracle(g1).value == 5
    assert rev_oracle(g2).value == 6
    assert rev_oracle(bt3).value == 5


def test_witnesses_are_valid(g1, bt3):
    for g in (g1, bt3, chain(6)):
        res = rev_oracle(g)
        assert validate_persistent(g, res.witness).space == res.value
        res = vrev_oracle(g)
        assert validate_visiting(g, res.witness).space == res.value


def test_min_steps_examples(bt3):
    assert min_steps_oracle(SINGLE, 1).value == 2
    assert min_steps_oracle(two_chain(), 2).value == 4
    with pytest.raises(Unreachable):
        min_steps_oracle(bt3, 4)
    with pytest.raises(ValueError, match="variant"):
        min_steps_oracle(bt3, 5, "sideways")


def test_more_pebbles_never_cost_more_steps(bt3):
    steps = [min_steps_oracle(bt3, k).value for k in range(5, 8)]
    assert steps == sorted(steps, reverse=True)
    # with every node available, bottom-up is optimal: one place per node,
    # one remove per non-root node
    assert steps[-1] == 2 * 7 - 1 + 1


def test_dt_examples(g1, g2, bt3):
    assert dt_oracle(SINGLE) == 1
    assert dt_oracle(bt3) == 5
    assert dt_oracle(g1) == 5 and dt_oracle(g2) == 6


def test_effective_predecessors(bt3):
    assert effective_predecessors(two_chain(), set(), "r") == {"u"}
    assert effective_predecessors(bt3, {"2"}, "1") == {"3", "6", "7"}
    assert effective_predecessors(bt3, set(bt3.nodes), "1") == frozenset()


def test_best_move_attains_the_value(bt3):
    game = DTGame(bt3)
    mask, c = game.start()
    u = game.best_move(mask, c)
    m2 = mask | 1 << u
    assert max(game.value(m2, u), game.value(m2, c)) == game.value(mask, c) == 5


def test_size_caps():
    big = random_tree(25, 1)
    for fn in (rev_oracle, vrev_oracle, dt_oracle):
        with pytest.raises(SizeCapExceeded):
            fn(big)
    with pytest.raises(SizeCapExceeded):
        min_steps_oracle(big, 5)


@settings(max_examples=40, deadline=None)
@given(trees(max_nodes=8))
def test_sandwich(t):
    r, v = rev_oracle(t).value, vrev_oracle(t).value
    assert v <= r <= v + 1


@settings(max_examples=40, deadline=None)
@given(dags(max_nodes=6))
def test_dt_matches_rev_on_dags(g):
    assert dt_oracle(g) == rev_oracle(g).value


@settings(max_examples=25, deadline=None)
@given(dags(max_nodes=6))
def test_pruning_does_not_change_dt(g):
    assert dt_oracle(g, prune=True) == dt_oracle(g, prune=False)


def test_complete_binary_tree_of_height_4():
    assert rev_oracle(complete_binary_tree(4)).value == 6
