# The octahedron three ways: search oracle, literal sum, sweep engine.
from chromstack.holonomy import format_state, run_sweep
from chromstack.penrose import chromatic_index, enumerate_good, format_labeling, literal_sum, sign_stats, tait_expand
from chromstack.surface import dualize, preset
from chromstack.sweep import reference_plan

tri = preset("octahedron")
print(tri)
print("dual:", dualize(tri).counts, "(vertices, edges, faces of the cube)")

# pruned backtracking
K = chromatic_index(tri)
print("K from the oracle:", K)

# every one of the 3^12 labelings, summed as Gaussian integers
print("K from the literal sum:", literal_sum(tri))

# a few good numberings and their sign statistics
for u in list(enumerate_good(tri))[:3]:
    plus, minus = sign_stats(tri, u)
    print(format_labeling(u), " n+ - n- =", plus - minus)

# each numbering gives four face colourings of the cube
u = next(enumerate_good(tri))
for col in tait_expand(tri, u):
    print(" ".join(f"{v}={c}" for v, c in sorted(col.items())))
print("good colourings of the cube:", 4 * K)

# the sweep, with the state of e_1 after each move
plan = reference_plan("octahedron", tri)
print("paths:", " ".join("".join(p) for p in plan.paths))
rep = run_sweep(tri, plan, convention="unsigned", trace_states=True)
for k, st in enumerate(rep.states, 1):
    print(f"  {k}: {format_state(st, k)}")
print("trace:", rep.K, " ops:", rep.ops_count, " naive products:", rep.naive_products)
print(f"reduction: {rep.reduction:.0f}x")
