# %% [markdown]
# # Linear-time pebbling of bounded-degree trees
#
# Cut the tree into about n^(1/k) connected parts, pebble each part
# recursively while the earlier parts' roots stay pebbled, then clean up.
# Moves stay linear in n (about 2^k n) and pebbles grow like n^(1/k).

# %%
import math
import random

from revpebble.generators import separator_pebbling
from revpebble.treecore import random_tree

for k in (1, 2, 3):
    for n in (1_000, 10_000, 100_000):
        tree = random_tree(n, random.Random(n), max_degree=3)
        r = separator_pebbling(tree, k)
        print(f"k={k} n={n:>7,}  space={r.space:>6} ({r.space / n ** (1 / k):.2f} n^(1/{k}))  moves/n={r.moves / n:.2f}")
    print()

# %% Small instances can be materialised as an ordinary move list.
r = separator_pebbling(random_tree(50, 7, 3), 2)
print(" ".join(str(m) for m in r.sequence()[:12]), "...")
print(f"{r.moves} moves, space {r.space}, about {math.sqrt(50):.1f} = sqrt(n)")
