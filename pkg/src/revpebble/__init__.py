"""Optimal reversible pebbling of rooted trees via edge rank colorings."""

from .generators import (
    GenReport,
    bottom_up_pebbling,
    bt_epsilon_pebbling,
    bt_optimal_pebbling,
    chain_pebbling,
    separator_pebbling,
)
from .oracle import dt_oracle, min_steps_oracle, rev_oracle, vrev_oracle
from .pebbling import (
    Move,
    MoveKind,
    PebbleSequence,
    PebbleStats,
    PebblingError,
    parse_moves,
    format_moves,
    validate_persistent,
    validate_visiting,
)
from .ranking import (
    RankingError,
    erank,
    erank_bruteforce,
    erank_opt,
    validate_coloring,
    validate_matchings,
)
from .strategy import Internal, Leaf, compile_strategy, solve, validate_strategy
from .treecore import (
    Dag,
    GraphError,
    RootedTree,
    UndirectedTree,
    chain,
    complete_binary_tree,
    parse_graph,
    serialize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
