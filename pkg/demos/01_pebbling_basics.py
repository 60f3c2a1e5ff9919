# %% [markdown]
# # Reversible pebbling by hand
#
# Edges point from child to parent, so the root is the only sink. A pebble
# may go on or come off a node only while all of its children carry
# pebbles. We play a few moves on the complete binary tree of height 3.

# %%
from revpebble.oracle import rev_oracle, vrev_oracle
from revpebble.pebbling import PebblingError, apply_move, format_moves, place, remove, validate_persistent
from revpebble.treecore import complete_binary_tree, serialize

bt3 = complete_binary_tree(3)
print(serialize(bt3))

# %% Leaves are free; an internal node needs both children.
config = apply_move(bt3, set(), place("4"))
config = apply_move(bt3, config, place("5"))
config = apply_move(bt3, config, place("2"))
print(sorted(config))

try:
    apply_move(bt3, {"4"}, place("2"))
except PebblingError as exc:
    print("rejected:", exc)

# %% Removal obeys the same rule, which is what makes the game reversible.
try:
    apply_move(bt3, {"2", "4"}, remove("2"))
except PebblingError as exc:
    print("rejected:", exc)

# %% [markdown]
# A persistent pebbling ends with only the root pebbled. The exhaustive
# oracle finds the fewest pebbles for which one exists, along with a
# shortest sequence at that budget.

# %%
best = rev_oracle(bt3)
print("pebbles needed:", best.value)
print(format_moves(best.witness))
stats = validate_persistent(bt3, best.witness)
print(f"space {stats.space}, time {stats.time} (moves + 1)")

# %% The visiting variant ends empty and may save one pebble.
print("visiting:", vrev_oracle(bt3).value)
