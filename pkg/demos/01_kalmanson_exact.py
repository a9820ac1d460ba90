# Exact solutions when the distance matrix is Kalmanson.
#
# Points in convex position, numbered around the hull, give a Kalmanson
# matrix. On such matrices the cubic DP returns an optimal pair of tours:
# tour 1 ascending, tour 2 descending in node number.

# %%
import time

import numpy as np

from balanced2tsp import (
    brute_force_2tsp,
    generate_instance,
    is_kalmanson,
    ks_multi,
    permute_matrix,
    solve_kalmanson_exact,
)

inst = generate_instance(10, 3, seed=1, mode="kalmanson-convex")
print("fixed nodes (1-based):", [f + 1 for f in inst.fixed])
print("Kalmanson:", is_kalmanson(inst.matrix)[0])

# %%
sol = solve_kalmanson_exact(inst)
print(sol.sequence.format(inst.matrix))
print("brute force:", brute_force_2tsp(inst).length)

# %% scrambling the hull order breaks the property
rng = np.random.default_rng(0)
perm = rng.permutation(inst.n)
perm = np.r_[0, perm[perm != 0]]
ok, w = is_kalmanson(permute_matrix(inst.matrix, perm))
print("scrambled Kalmanson:", ok, "witness (1-based):", w.one_based(), "inequality", w.inequality)

# %% the DP on the scrambled matrix is only an upper bound, KS renumbers first
from balanced2tsp import Instance

pos = np.argsort(perm)
scrambled = Instance(permute_matrix(inst.matrix, perm), tuple(int(pos[f]) for f in inst.fixed), inst.p)
print("DP on scrambled labels:", solve_kalmanson_exact(scrambled).length)
print("KS over all starts:    ", ks_multi(scrambled).length)

# %% cubic growth
for n in (100, 200, 400):
    big = generate_instance(n, n // 10, seed=2, mode="kalmanson-convex")
    t0 = time.perf_counter()
    solve_kalmanson_exact(big)
    print(f"n={n:4d}  {time.perf_counter() - t0:.3f} s")
