import math

import pytest
from hypothesis import given, settings

from conftest import text_of, trees
from revpebble.ranking import (
    BRUTEFORCE_MAX_EDGES,
    ContractionState,
    RankingError,
    as_undirected,
    coloring_to_matchings,
    contract,
    erank,
    erank_bruteforce,
    erank_opt,
    format_coloring,
    format_matchings,
    matchings_to_coloring,
    parse_coloring,
    parse_matchings,
    rank_of,
    validate_coloring,
    validate_matchings,
)
from revpebble.treecore import UndirectedTree, chain, complete_binary_tree, underlying

BT3 = underlying(complete_binary_tree(3))
BT3_COLORING = {("2", "4"): 2, ("2", "5"): 1, ("3", "6"): 1, ("3", "7"): 2, ("1", "2"): 3, ("1", "3"): 4}
BT3_MATCHINGS = [
    frozenset({("2", "5"), ("3", "6")}),
    frozenset({("2", "4"), ("3", "7")}),
    frozenset({("1", "2")}),
    frozenset({("1", "3")}),
]


def path(n: int) -> UndirectedTree:
    return underlying(chain(n))


def star(k: int) -> UndirectedTree:
    return UndirectedTree([("c", f"l{i}") for i in range(k)])


def min_k(u: UndirectedTree) -> int:
    k = 0
    while not erank_bruteforce(u, k):
        k += 1
    return k


def test_validate_coloring_examples():
    assert validate_coloring(path(3), {("1", "2"): 1, ("2", "3"): 2}) == 2
    assert validate_coloring(BT3, BT3_COLORING) == 4
    with pytest.raises(RankingError) as info:
        validate_coloring(path(3), {("1", "2"): 1, ("2", "3"): 1})
    e, f, between = info.value.witness
    assert {e, f} == {("1", "2"), ("2", "3")} and between == []


def test_violation_witness_carries_the_path():
    col = {("1", "2"): 1, ("2", "3"): 3, ("3", "4"): 2, ("4", "5"): 1}
    with pytest.raises(RankingError) as info:
        validate_coloring(path(5), {**col, ("2", "3"): 2, ("3", "4"): 1, ("4", "5"): 2})
    assert info.value.witness[2]  # separated by smaller colours only
    assert validate_coloring(path(5), col) == 3


@pytest.mark.parametrize(
    "coloring, fragment",
    [
        ({("1", "2"): 1}, "no color"),
        ({("1", "2"): 1, ("2", "3"): 0}, "positive"),
        ({("1", "2"): 1, ("2", "3"): 2, ("1", "3"): 3}, "not an edge"),
    ],
)
def test_malformed_colorings(coloring, fragment):
    with pytest.raises(RankingError, match=fragment):
        validate_coloring(path(3), coloring)


def test_erank_opt_examples():
    assert erank_opt(UndirectedTree([], ["v"])) == {}
    assert erank(BT3) == 4
    for n in range(1, 11):
        assert erank(path(n)) == math.ceil(math.log2(n)) == min_k(path(n))


def test_bruteforce_examples():
    assert erank_bruteforce(path(2), 1)
    assert not erank_bruteforce(BT3, 3) and erank_bruteforce(BT3, 4)
    assert not erank_bruteforce(star(3), 2) and erank_bruteforce(star(3), 3)
    big = path(BRUTEFORCE_MAX_EDGES + 2)
    with pytest.raises(ValueError, match="capped"):
        erank_bruteforce(big, 5)


@settings(max_examples=80, deadline=None)
@given(trees(max_nodes=11))
def test_erank_opt_is_valid_and_optimal(t):
    u = underlying(t)
    col = erank_opt(u)
    assert validate_coloring(u, col) == rank_of(col)
    assert sorted(set(col.values())) == list(range(1, rank_of(col) + 1))
    assert rank_of(col) == min_k(u)


@settings(max_examples=40)
@given(trees(max_nodes=30))
def test_erank_opt_is_deterministic(t):
    u = underlying(t)
    again = as_undirected(sorted(u.edges, reverse=True), u.nodes)
    assert erank_opt(u) == erank_opt(again)


def test_contract_examples():
    two = path(2)
    s = contract(ContractionState(two.nodes), two, [("1", "2")])
    assert s.classes() == 1
    s = contract(ContractionState(BT3.nodes), BT3, [("5", "2"), ("6", "3")])
    assert s.classes() == 5
    with pytest.raises(RankingError, match="share a node"):
        contract(ContractionState(BT3.nodes), BT3, [("4", "2"), ("5", "2")])
    with pytest.raises(RankingError, match="already contracted"):
        contract(s, BT3, [("2", "5")])


def test_contract_does_not_mutate_its_input():
    s0 = ContractionState(BT3.nodes)
    contract(s0, BT3, [("1", "2")])
    assert s0.classes() == 7


def test_validate_matchings_examples():
    assert validate_matchings(path(2), [{("1", "2")}]) == 1
    assert validate_matchings(BT3, BT3_MATCHINGS) == 4
    three = [BT3_MATCHINGS[0], BT3_MATCHINGS[1], BT3_MATCHINGS[2] | {("1", "3")}]
    with pytest.raises(RankingError, match="step 3"):
        validate_matchings(BT3, three)
    with pytest.raises(RankingError, match="did not reach"):
        validate_matchings(BT3, BT3_MATCHINGS[:3])


def test_coloring_and_matchings_correspond():
    assert coloring_to_matchings(path(3), {("1", "2"): 1, ("2", "3"): 2}) == [
        frozenset({("1", "2")}),
        frozenset({("2", "3")}),
    ]
    assert coloring_to_matchings(BT3, BT3_COLORING) == BT3_MATCHINGS
    assert matchings_to_coloring(path(2), [{("2", "1")}]) == {("1", "2"): 1}
    col = matchings_to_coloring(BT3, BT3_MATCHINGS)
    assert col == BT3_COLORING and validate_coloring(BT3, col) == 4


@settings(max_examples=60)
@given(trees(max_nodes=13))
def test_optimal_coloring_gives_matchings(t):
    u = underlying(t)
    seq = coloring_to_matchings(u, erank_opt(u))
    assert validate_matchings(u, seq) == erank(u)
    assert matchings_to_coloring(u, seq) == erank_opt(u)


def test_text_formats():
    text = format_coloring(BT3_COLORING)
    assert parse_coloring(text) == BT3_COLORING
    assert parse_coloring(text_of("bt3.coloring")) == BT3_COLORING
    assert parse_matchings(text_of("bt3.matchings"), BT3) == BT3_MATCHINGS
    assert format_matchings(BT3_MATCHINGS) == text_of("bt3.matchings")
    with pytest.raises(RankingError, match="line 1"):
        parse_coloring("1 2\n")
    with pytest.raises(RankingError, match="cannot resolve"):
        parse_matchings("1-7\n", BT3)


def test_hyphenated_node_ids():
    u = UndirectedTree([("a-b", "c"), ("c", "d")])
    seq = parse_matchings("a-b-c\nc-d\n", u)
    assert seq == [frozenset({("a-b", "c")}), frozenset({("c", "d")})]
