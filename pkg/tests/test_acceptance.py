"""Headline acceptance criteria.

Each test records one PASS/FAIL line (shown in the pytest terminal summary,
or printed directly when this file is run as a script) and then asserts it.
"""

import sys
import time
from pathlib import Path

import pytest
import sympy

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from chromstack import replab  # noqa: E402
from chromstack.gaussian import GaussInt  # noqa: E402
from chromstack.holonomy import TensorState, loop_matrix_is_scalar, parse_state, run_sweep  # noqa: E402
from chromstack.penrose import count_good, enumerate_good, literal_sum, oracle_report, sign_stats, tait_expand  # noqa: E402
from chromstack.section import boundary_scalar, build_section, nonvanishing_certificate  # noqa: E402
from chromstack.surface import dualize, preset, random_sphere  # noqa: E402
from chromstack.sweep import plan_best, plan_sweep, reference_plan, verify_plan  # noqa: E402

pytestmark = pytest.mark.acceptance

RESULTS: list[str] = []

# octahedron sweep, the eight printed state lines in their printed term order
PRINTED_LINES = [
    "i(23 - 32)",
    "i^2(313 - 133 - 122 + 212)",
    "i^3(3112 - 3121 - 1312 + 1321 - 1231 + 1213 + 2131 - 2113)",
    "i^4(-331 - 122 - 111 - 111 - 133 - 221)",
    "i^5(-3121 + 3211 - 1312 + 1132 - 1231 + 1321 - 1231 + 1321 - 1123 + 1213 - 2311 + 2131)",
    "i^6(-221 - 111 + 212 - 331 - 221 - 331 - 221 + 313 - 111 - 331)",
    "i^7(23 + 23 - 32 + 23 - 32 + 23 - 32 - 32)",
    "i^8(1 + 1 + 1 + 1)",
]


def record(name: str, checks: list[tuple[str, bool, str]]) -> bool:
    ok = all(c for _, c, _ in checks)
    parts = [f"{label}={'ok' if c else 'FAIL'}" + (f" ({info})" if info else "") for label, c, info in checks]
    line = f"{'PASS' if ok else 'FAIL'}  {name}: " + "; ".join(parts)
    RESULTS.append(line)
    print(line)
    return ok


def _distinct_colourings(tri) -> int:
    seen = set()
    for u in enumerate_good(tri):
        for c in tait_expand(tri, u):
            seen.add(tuple(sorted(c.items())))
    return len(seen)


def test_octahedron():
    tri = preset("octahedron")
    t = time.perf_counter()
    oracle = count_good(tri).K
    engine = run_sweep(tri, plan_sweep(tri)).K
    colourings = _distinct_colourings(tri)
    dt = time.perf_counter() - t
    independent = oracles.face_colourings(dualize(tri).faces)
    ok = record(
        "octahedron K=24, 96 colourings, < 1 s",
        [
            ("oracle", oracle == 24, f"{oracle}"),
            ("engine", engine == 24, f"{engine}"),
            ("colourings", colourings == 96 == independent, f"{colourings}, independent count {independent}"),
            ("runtime", dt < 1.0, f"{dt:.3f} s"),
        ],
    )
    assert ok


def test_icosahedron():
    tri = preset("icosahedron")
    t = time.perf_counter()
    plan = plan_sweep(tri)
    engine = run_sweep(tri, plan).K
    oracle = count_good(tri).K
    colourings = _distinct_colourings(tri)
    dt = time.perf_counter() - t
    independent = oracles.face_colourings(dualize(tri).faces)
    ok = record(
        "icosahedron K=60, 240 colourings, < 10 s",
        [
            ("engine", engine == 60, f"{engine}"),
            ("oracle", oracle == 60, f"{oracle}"),
            ("colourings", colourings == 240 == independent, f"{colourings}, independent count {independent}"),
            ("runtime", dt < 10.0, f"{dt:.3f} s"),
        ],
    )
    assert ok


def test_tetrahedron_literal_sum():
    tri = preset("tetrahedron")
    lit = literal_sum(tri)
    oracle = count_good(tri).K
    engine = run_sweep(tri, plan_sweep(tri)).K
    brute = oracles.brute_good_labelings(tri.triangles)
    ok = record(
        "tetrahedron literal sum = oracle = engine = 6",
        [
            ("literal", lit == GaussInt(6), f"{lit}"),
            ("oracle", oracle == 6, f"{oracle}"),
            ("engine", engine == 6, f"{engine}"),
            ("brute force", brute == 6, f"{brute}"),
        ],
    )
    assert ok


def test_worked_example_replay():
    tri = preset("octahedron")
    t = time.perf_counter()
    plan = reference_plan("octahedron", tri)
    rep = run_sweep(tri, plan, convention="unsigned", trace_states=True)
    dt = time.perf_counter() - t
    K = count_good(tri).K
    checks = []
    for k, text in enumerate(PRINTED_LINES, 1):
        got = rep.states[k - 1]
        want = parse_state(text)
        info = "" if got == want else f"engine {got!r} vs printed {text}"
        checks.append((f"line {k}", got == want, info))
    final = rep.states[-1]
    scalar = final.terms.get((1,)) if final.length == 1 and len(final.terms) == 1 else None
    checks.append(("scalar multiple of start", scalar is not None, f"scalar {scalar}"))
    if scalar is not None:
        checks.append(("reported ratio to K/3", True, f"{scalar} / ({K}/3) = {sympy.Rational(scalar.re * 3, K)}"))
    checks.append(("runtime", dt < 1.0, f"{dt:.3f} s"))
    ok = record("octahedron worked replay, eight state lines", checks)
    assert ok


def _spheres():
    for seed in range(20):
        n = 8 + 2 * (seed * 7 % 17)  # 8..40 triangles
        yield seed, random_sphere(n, seed=seed, flips=n // 2)


def test_property_suite():
    t = time.perf_counter()
    sizes = []
    fails: dict[str, list[str]] = {
        "oracle == engine": [],
        "scalar loop, 3 lambda = K": [],
        "K same on >= 2 plans": [],
        "K same under reversal": [],
        "mod 4": [],
        "boundary arrow = K Ft": [],
        "equivariance": [],
        "nonvanishing": [],
    }
    for seed, tri in _spheres():
        sizes.append(tri.t2)
        tag = f"seed {seed} ({tri.t2} triangles)"
        oracle = oracle_report(tri)
        main = plan_best(tri, "power")
        rep = run_sweep(tri, main)
        K = rep.K
        if oracle.K != K:
            fails["oracle == engine"].append(f"{tag}: {oracle.K} vs {K}")
        scalar, lam = loop_matrix_is_scalar(rep)
        if not scalar or 3 * lam != GaussInt(K):
            fails["scalar loop, 3 lambda = K"].append(tag)
        others = [p for p in (plan_sweep(tri), plan_best(tri, "width"), plan_sweep(tri, tie_break="revlex")) if p != main]
        if not others or any(run_sweep(tri, p).K != K for p in others) or not all(verify_plan(tri, p).ok for p in others):
            fails["K same on >= 2 plans"].append(tag)
        rev = tri.reversed()
        if run_sweep(rev, plan_sweep(rev)).K != K:
            fails["K same under reversal"].append(tag)
        if oracle.mod4_violations or any((p - m) % 4 for p, m in (sign_stats(tri, u) for u in enumerate_good(tri))):
            fails["mod 4"].append(tag)
        sec = build_section(tri, main)
        bwd = sec.boundary[1][1].matrix
        if bwd != replab.Ft_matrix().scale(K):
            c = boundary_scalar(sec)
            fails["boundary arrow = K Ft"].append(f"{tag}: arrow = {c} Ft, K = {K}")
        cert = nonvanishing_certificate(sec, equivariance=True)
        if not all(e.equivariant for e in cert.edges):
            fails["equivariance"].append(tag)
        if K != 0 and not cert.all_nonvanishing:
            fails["nonvanishing"].append(tag)
    dt = time.perf_counter() - t
    checks = []
    for label, bad in fails.items():
        info = f"{len(bad)}/20 fail, e.g. {bad[0]}" if bad else "20/20"
        checks.append((label, not bad, info))
    checks.append(("sizes 8..40", min(sizes) >= 8 and max(sizes) <= 40, f"{min(sizes)}..{max(sizes)}"))
    checks.append(("runtime", dt < 60.0, f"{dt:.1f} s"))
    ok = record("property suite over 20 seeded random spheres", checks)
    assert ok


def test_performance():
    tri = preset("octahedron")
    rep = run_sweep(tri, reference_plan("octahedron", tri))
    ok = record(
        "octahedron performance",
        [
            ("ops < 1000", rep.ops_count < 1000, f"{rep.ops_count}"),
            ("peak support <= 81", rep.peak_support <= 81, f"{rep.peak_support}"),
            ("reduction >= 500x", rep.reduction >= 500, f"{rep.naive_products} / {rep.ops_count} = {rep.reduction:.0f}x"),
        ],
    )
    assert ok


def test_calibration():
    rep = replab.calibrate()
    exact = True
    for rels in rep.relations.values():
        for r in rels:
            for v in r.scalars.values():
                val = sympy.sympify(v)
                exact &= val.is_number and bool(val.is_rational or (sympy.re(val).is_rational and sympy.im(val).is_rational))
    dims = rep.hom_dimensions
    ok = record(
        "calibration",
        [
            ("Ft F = 2 I", rep.scalar("FtF") == 2, f"order {rep.frozen_order}"),
            ("exact scalars", exact, f"F Ft = {rep.scalar('FFt')} A"),
            ("dim hom(V,V^2) = 1", dims["hom(V^1,V^2)"] == 1, ""),
            ("dim hom(V^2,V) = 1", dims["hom(V^2,V^1)"] == 1, ""),
        ],
    )
    assert ok


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
