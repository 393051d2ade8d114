# Oracle against engine on random spheres of growing size.
# The engine cost is governed by the longest path in the sweep, so a
# width-optimized plan pays off quickly.
import time

from chromstack import chromatic_index, plan_best, plan_sweep, random_sphere, run_sweep


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


for n in (20, 40, 60, 80):
    tri = random_sphere(n, seed=n, flips=n)
    K, t_oracle = timed(chromatic_index, tri)

    first = plan_sweep(tri)
    rep_first, t_first = timed(run_sweep, tri, first)

    narrow, t_plan = timed(plan_best, tri, "width")
    rep_narrow, t_narrow = timed(run_sweep, tri, narrow)

    assert K == rep_first.K == rep_narrow.K
    print(
        f"{n:3d} triangles  K={K:<7d} oracle {t_oracle:6.2f}s |"
        f" first plan: peak {first.peak_length:2d}, engine {t_first:6.2f}s |"
        f" narrow plan: peak {narrow.peak_length:2d}, planning {t_plan:5.2f}s, engine {t_narrow:5.3f}s"
    )
