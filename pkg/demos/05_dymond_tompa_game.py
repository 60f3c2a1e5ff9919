# %% [markdown]
# # The pebbler/challenger game
#
# The challenger starts by pointing at the root. The pebbler places a
# pebble anywhere; the challenger either keeps the current challenge or
# moves it to the new pebble. The pebbler wins once every in-neighbour of
# the challenged node is pebbled. The number of pebbles needed against a
# perfect challenger equals the reversible pebbling number.

# %%
from revpebble.oracle import DTGame, dt_oracle, rev_oracle
from revpebble.treecore import parse_graph

g = parse_graph("2 1\n3 1\n4 1\n4 3\n5 4\n6 4\n7 4\n")
print("game value:", dt_oracle(g), " pebbling number:", rev_oracle(g).value)

# %% Both sides play perfectly: the challenger keeps whichever node is
# worth more to it.
game = DTGame(g)
mask, c = game.start()
while game._need[c] & mask != game._need[c]:
    u = game.best_move(mask, c)
    mask |= 1 << u
    nxt = u if game.value(mask, u) >= game.value(mask, c) else c
    print(f"pebble {g.nodes[u]}, challenge {g.nodes[c]} -> {g.nodes[nxt]}")
    c = nxt
print("pebbles used:", bin(mask).count("1"))

# %% A careless challenger that always follows the new pebble loses sooner.
mask, c = game.start()
while game._need[c] & mask != game._need[c]:
    c = game.best_move(mask, c)
    mask |= 1 << c
print("against the careless challenger:", bin(mask).count("1"))
