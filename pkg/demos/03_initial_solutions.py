# Does the quality of the starting tours matter?
#
# Runs the improvement driver from KS starts and from random partitions
# with the same time budget on a few random instances.

# %%
import time

import numpy as np

from balanced2tsp import generate_instance, ks_multi, preset, run_pipeline

rows = []
for seed, f in enumerate((8, 16, 24)):
    inst = generate_instance(48, f, seed=seed)
    t0 = time.perf_counter()
    ks = run_pipeline(inst, preset("h42x48", max_iters=12))
    budget = time.perf_counter() - t0
    rp = run_pipeline(inst, preset("h42x48", init="rp", max_iters=None, time_limit=budget))
    rows.append((f, ks_multi(inst).length, ks.length, rp.length, budget, rp.iterations_run))

# %%
print(f"{'|S|':>4} {'KS only':>10} {'KS+H':>10} {'RP+H':>10} {'budget s':>9} {'RP starts':>9}")
for f, base, a, b, t, k in rows:
    print(f"{f:4d} {base:10.1f} {a:10.1f} {b:10.1f} {t:9.1f} {k:9d}")
a = np.array([r[2] for r in rows])
b = np.array([r[3] for r in rows])
print(f"mean relative difference RP vs KS: {np.mean((b - a) / a) * 100:+.2f}%")
