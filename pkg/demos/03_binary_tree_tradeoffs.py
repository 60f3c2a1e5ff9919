# %% [markdown]
# # Space against time on complete binary trees
#
# Two explicit strategies. The spine strategy matches the optimal pebble
# count (checked against the exact solver where that is cheap). The
# k-parameterised strategy spends a few extra pebbles to keep the number of
# moves polynomial. Every sequence below is replayed and validated in full.

# %%
from revpebble.generators import bt_epsilon_pebbling, bt_optimal_pebbling
from revpebble.strategy import solve
from revpebble.treecore import complete_binary_tree

print(" h  optimal  spine(space, time)")
for h in range(2, 10):
    opt = solve(complete_binary_tree(h)).rev if h <= 8 else None
    r = bt_optimal_pebbling(h)
    print(f"{h:2d}  {opt!s:>7}  ({r.space}, {r.time})")

# %% Larger k: fewer extra pebbles, more moves.
h = 12
for k in (1, 2, 3, 4):
    r = bt_epsilon_pebbling(h, k)
    print(f"k={k}: space {r.space:3d} (bound {(k + 1) / k * h + k + 1:.1f}), time {r.time:,}")
