# Improving KS solutions with sliding windows on a random instance.
#
# The pair of tours is read as one two-vehicle route. Two windows of s
# customers stay free, everything else is glued into sub-paths, and the
# small instance (always 2s + 6 entities) is solved exactly.

# %%
from balanced2tsp import (
    disassemble,
    entity_count,
    generate_instance,
    h_improve,
    improve_tours,
    ks_multi,
    preset,
    render_svg,
    run_pipeline,
    sequence_length,
    window_placements,
)

inst = generate_instance(48, 8, seed=7)
start = ks_multi(inst)
print("KS over all starts:", round(start.length, 3))

# %% one sub-instance
q = start.sequence
k1, k2 = len(q.tour1) - 1, len(q.tour2) - 1
cfg = list(window_placements(k1, k2, 4, 2))[5]
v = disassemble(q, cfg, inst)
print(cfg, "entities:", entity_count(v))
for idx, cust in enumerate(v.customers):
    tag = "F1" if idx in v.f1 else "F2" if idx in v.f2 else ""
    print(f"  {idx:2d}  path={[x + 1 for x in cust.path]}  demand={cust.demand} {tag}")

# %% one pass of H(4,2) and 2-opt
better = improve_tours(h_improve(q, 4, 2, inst), inst.matrix)
print("after one pass:", round(sequence_length(better, inst.matrix), 3))

# %% the full driver with 12 initial solutions
rec = run_pipeline(inst, preset("h42x48", max_iters=12))
gap = (rec.length - start.length) / start.length * 100
print(f"record {rec.length:.3f} ({gap:+.2f}% against KS), found from initial solution {rec.iteration}")
render_svg(inst, rec.sequence, "sliding_windows.svg")
print("drawing written to sliding_windows.svg")
