# %% [markdown]
# # From an edge coloring to an optimal pebbling
#
# The optimal number of pebbles for a tree is one more than the fewest
# colors in an edge rank coloring of its undirected shape. This walk-through
# follows one certificate through every representation the library has.

# %%
from revpebble.pebbling import format_moves, validate_persistent
from revpebble.ranking import coloring_to_matchings, erank_opt, format_coloring, format_matchings, validate_coloring
from revpebble.strategy import compile_strategy, depth, format_strategy, matchings_to_strategy
from revpebble.treecore import complete_binary_tree, underlying

tree = complete_binary_tree(4)
shape = underlying(tree)

# %% Colors: two equal colors always have a larger one between them.
coloring = erank_opt(shape)
print(format_coloring(coloring))
print("rank:", validate_coloring(shape, coloring))

# %% Rounds of contraction: round i contracts the edges colored i.
rounds = coloring_to_matchings(shape, coloring)
print(format_matchings(rounds))

# %% The edge contracted last splits the tree; each side recurses.
strategy = matchings_to_strategy(tree, rounds)
print(format_strategy(strategy))
print("depth:", depth(strategy))

# %% Compiling: pebble the cut-off subtree, pebble the rest while holding
# its top, then undo the first part.
moves = compile_strategy(tree, strategy)
stats = validate_persistent(tree, moves)
print(f"space {stats.space}, time {stats.time}")
print(format_moves(moves[:12]), "...")
