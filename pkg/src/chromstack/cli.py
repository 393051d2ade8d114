"""Command line front end: ``chromstack <command> [input] [flags]``.

Input is one of ``--preset NAME``, ``--input FILE`` (.tri or .json) or
``--random N`` (a seeded random sphere with N triangles).  Every command
prints a human-readable report, or with ``--json`` a single sorted JSON
object.  Timings appear only with ``--timings`` so that default output is
byte-for-byte reproducible.  The exit code is 0 iff every cross-check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import holonomy, penrose, replab, section, surface, sweep
from .gaussian import GaussInt

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


class _Out:
    """Collects report lines and JSON fields, plus the cross-check verdicts."""

    def __init__(self, as_json: bool, timings: bool):
        self.as_json = as_json
        self.timings = timings
        self.data: dict = {}
        self.lines: list[str] = []
        self.failures: list[str] = []

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.data.setdefault("checks", {})[name] = bool(ok)
        self.line(f"[{'ok' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        if not ok:
            self.failures.append(name)
        return ok

    def timing(self, name: str, seconds: float) -> None:
        if self.timings:
            self.data.setdefault("timings", {})[name] = round(seconds, 6)
            self.line(f"  time {name}: {seconds:.4f} s")

    def emit(self) -> int:
        if self.as_json:
            sys.stdout.write(json.dumps(self.data, sort_keys=True, indent=2) + "\n")
        else:
            sys.stdout.write("\n".join(self.lines) + "\n")
        return EXIT_CHECK if self.failures else EXIT_OK


def _timed(fn: Callable, *args, **kwargs):
    t = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t


# ---------------------------------------------------------------------------
# input


def _load_input(args) -> tuple[str, surface.Triangulation]:
    given = [x for x in (args.preset, args.input, args.random) if x is not None]
    if len(given) != 1:
        raise ValueError("give exactly one of --preset, --input, --random")
    if args.preset is not None:
        tri = surface.preset(args.preset)
        name = args.preset
    elif args.input is not None:
        tri = surface.load(args.input)
        name = Path(args.input).name
    else:
        tri = surface.random_sphere(args.random, seed=args.seed, flips=args.flips)
        name = f"random({args.random}, seed={args.seed}, flips={args.flips})"
    report = surface.validate(tri)
    if not report.ok:
        raise ValueError(f"invalid triangulation {name}: {report}")
    return name, tri


def _load_plan(args, name: str, tri: surface.Triangulation, objective: str | None = None) -> sweep.SweepPlan:
    if args.plan == "reference":
        return sweep.reference_plan(name, tri)
    if args.plan:
        return sweep.SweepPlan.from_json(Path(args.plan).read_text())
    if objective:
        return sweep.plan_best(tri, objective)
    return sweep.plan_sweep(tri)


def _header(out: _Out, name: str, tri: surface.Triangulation) -> None:
    out.data["input"] = {"name": name, "t0": tri.t0, "t1": tri.t1, "t2": tri.t2}
    out.line(f"{name}: t0={tri.t0} t1={tri.t1} t2={tri.t2}")


def _engine(out: _Out, tri, plan, convention="coherent", trace_states=False) -> holonomy.HolonomyReport:
    rep, dt = _timed(holonomy.run_sweep, tri, plan, convention=convention, trace_states=trace_states)
    scalar, lam = holonomy.loop_matrix_is_scalar(rep)
    out.data["engine"] = {
        "K": rep.K,
        "convention": convention,
        "ops_count": rep.ops_count,
        "peak_support": rep.peak_support,
        "peak_length": plan.peak_length,
        "naive_products": rep.naive_products,
        "lambda": str(lam) if scalar else None,
    }
    out.data.setdefault("K", rep.K)
    out.line(f"engine K = {rep.K}  (ops {rep.ops_count}, peak support {rep.peak_support}, path peak {plan.peak_length})")
    out.line(f"  naive products 3^{tri.t1} = {rep.naive_products}, reduction {rep.naive_products / max(rep.ops_count, 1):.1f}x")
    out.check("loop matrix is scalar", scalar, f"lambda = {lam}" if scalar else "")
    if scalar:
        out.check("3 lambda == K", 3 * lam == rep.trace, f"3 * {lam} = {3 * lam}")
    out.timing("engine", dt)
    return rep


# ---------------------------------------------------------------------------
# commands


def cmd_index(args, out: _Out) -> None:
    name, tri = _load_input(args)
    _header(out, name, tri)
    use_engine = args.engine or args.both
    use_oracle = args.oracle or args.both or not (args.engine or args.literal)
    values = {}
    if use_oracle:
        if args.workers > 1:
            res, dt = _timed(penrose.count_good, tri, args.budget, args.workers)
        else:
            res, dt = _timed(penrose.oracle_report, tri, args.budget)
        values["oracle"] = res.K
        out.data["oracle"] = res.to_dict()
        out.line(f"oracle K = {res.K}  ({res.nodes_visited} search nodes)")
        if res.mod4_violations is not None:
            out.check("n+ - n- = 0 mod 4 for every good labeling", res.mod4_violations == 0, f"{res.mod4_violations} violations")
        out.timing("oracle", dt)
    if args.literal:
        val, dt = _timed(penrose.literal_sum, tri)
        out.data["literal"] = str(val)
        out.line(f"literal sum over 3^{tri.t1} labelings = {val}")
        out.check("literal sum is real", val.is_real())
        values["literal"] = val.re
        out.timing("literal", dt)
    if use_engine:
        plan = _load_plan(args, name, tri)
        values["engine"] = _engine(out, tri, plan).K
    distinct = set(values.values())
    out.data["K"] = next(iter(distinct)) if len(distinct) == 1 else None
    if len(values) > 1:
        out.check("all methods agree", len(distinct) == 1, ", ".join(f"{k}={v}" for k, v in values.items()))
    out.line(f"K = {out.data['K']}")


def cmd_colourings(args, out: _Out) -> None:
    name, tri = _load_input(args)
    _header(out, name, tri)
    if args.engine:
        plan = _load_plan(args, name, tri)
        K = _engine(out, tri, plan).K
    else:
        K = penrose.count_good(tri, args.budget).K
    out.data["K"] = K
    out.data["colourings"] = 4 * K
    out.line(f"K = {K}; good face colourings of the dual = {4 * K}")
    if args.list:
        listed = []
        bad = 0
        for u in penrose.enumerate_good(tri, args.budget):
            for col in penrose.tait_expand(tri, u):
                if not penrose.is_good_colouring(tri, col):
                    bad += 1
                listed.append(" ".join(f"{v}={col[v]}" for v in tri.vertices))
                if args.limit and len(listed) >= args.limit:
                    break
            if args.limit and len(listed) >= args.limit:
                break
        out.data["listed"] = listed
        out.line(f"faces of the dual are named by the vertices {' '.join(tri.vertices)}")
        out.lines.extend(listed)
        out.check("every listed colouring is proper", bad == 0)
        if not args.limit:
            out.check("listed count is 4K", len(listed) == 4 * K, f"{len(listed)}")


def cmd_enumerate(args, out: _Out) -> None:
    name, tri = _load_input(args)
    _header(out, name, tri)
    rows = []
    mod4 = True
    count = 0
    for u in penrose.enumerate_good(tri, args.budget):
        count += 1
        plus, minus = penrose.sign_stats(tri, u)
        mod4 &= (plus - minus) % 4 == 0
        if not args.limit or len(rows) < args.limit:
            rows.append({"labeling": penrose.format_labeling(u), "n_plus": plus, "n_minus": minus})
    out.data["count"] = count
    out.data["labelings"] = rows
    for r in rows:
        out.line(f"{r['labeling']}  (n+={r['n_plus']}, n-={r['n_minus']})")
    out.line(f"{count} good labelings")
    out.check("n+ - n- = 0 mod 4 for every labeling", mod4)


def cmd_plan(args, out: _Out) -> None:
    name, tri = _load_input(args)
    _header(out, name, tri)
    if args.plan:
        plan = _load_plan(args, name, tri)
    elif args.optimize != "first":
        plan = sweep.plan_best(tri, args.optimize, width_cap=args.width_cap)
    else:
        base = tuple(args.base.split(",")) if args.base else None
        plan = sweep.plan_sweep(tri, base, width_cap=args.width_cap, budget=args.plan_budget, tie_break=args.tie_break)
    rep = sweep.verify_plan(tri, plan)
    powers = sweep.vertex_powers(plan) if rep.ok else {}
    out.data["plan"] = json.loads(plan.to_json())
    out.data["peak_length"] = rep.peak_length
    out.data["max_power"] = max(powers.values()) if powers else None
    out.line(f"base {''.join(plan.base)}, {len(plan.moves)} moves, peak path length {rep.peak_length}")
    if rep.ok:
        sep = "" if all(len(v) == 1 for v in tri.vertices) else " "
        for p in plan.paths:
            out.line("  " + sep.join(p))
    out.check("plan is a sweeping loop", rep.ok, "; ".join(rep.problems))
    if args.out:
        Path(args.out).write_text(plan.to_json())
        out.line(f"wrote {args.out}")


def cmd_holonomy(args, out: _Out) -> None:
    name, tri = _load_input(args)
    _header(out, name, tri)
    plan = _load_plan(args, name, tri)
    convention = args.convention or ("unsigned" if args.trace_states else "coherent")
    rep = _engine(out, tri, plan, convention, args.trace_states)
    out.data["matrix"] = [[str(rep.matrix.entry(r, c)) for c in range(3)] for r in range(3)]
    if args.trace_states:
        lines = [holonomy.format_state(s, k) for k, s in enumerate(rep.states, 1)]
        out.data["states"] = lines
        out.line("start e_1:  1")
        for k, text in enumerate(lines, 1):
            out.line(f"  step {k}: {text}")
        final = rep.states[-1].terms.get((1,), GaussInt(0)) if rep.states else GaussInt(1)
        coherent = rep if convention == "coherent" else holonomy.run_sweep(tri, plan)
        K = coherent.K
        ratio = Fraction(final.re, 1) / Fraction(K, 3) if K and final.is_real() else None
        out.data["final_scalar"] = str(final)
        out.data["K"] = K
        out.data["ratio_to_K_over_3"] = None if ratio is None else str(ratio)
        out.line(f"final scalar on e_1 = {final}; K = {K}; K/3 = {Fraction(K, 3)}; ratio = {ratio}")
        if convention == "unsigned":
            out.line(f"  trace under the all-plus convention = {rep.K} (coherent trace {K})")


def cmd_audit(args, out: _Out) -> None:
    name, tri = _load_input(args)
    _header(out, name, tri)
    plan = _load_plan(args, name, tri, objective="power")
    rep = _engine(out, tri, plan)
    K = rep.K
    zeros = [tuple(z.split(",")) for z in args.zero_edge or ()]
    sec, dt = _timed(section.build_section, tri, plan, zero_edges=zeros)
    out.timing("section", dt)
    listing = section.audit_listing(sec)
    out.data["listing"] = listing
    out.data["powers"] = dict(sorted(sec.powers.items()))
    out.lines.extend(listing)
    cert = section.nonvanishing_certificate(sec, equivariance=not args.no_equivariance)
    out.data["certificate"] = cert.to_dict()
    c = cert.boundary_scalar
    out.data["boundary_scalar"] = None if c is None else str(c)
    out.check("final boundary arrows are c Ft and c F", c is not None, f"c = {c}")
    if zeros:
        out.check("injected zero forces a zero boundary (predicted K = 0)", c == 0)
    else:
        out.check("3 c == K (boundary scalar is the loop scalar)", c is not None and 3 * c == K, f"3 * {c} vs K = {K}")
        holds = c is not None and c == K
        out.data["boundary_equals_K_Ft"] = holds
        out.line(f"  boundary arrow = K Ft as a literal identity: {'holds' if holds else f'does not hold (c = {c}, K = {K})'}")
        out.check("all arrows nonvanishing when K != 0", cert.all_nonvanishing or K == 0)
    if not args.no_equivariance:
        out.check("every arrow is an intertwiner", all(e.equivariant for e in cert.edges))
    out.check("certificate consistent (a zero arrow forces c = 0)", cert.consistent)
    if args.export:
        Path(args.export).write_text(sec.to_json())
        out.line(f"wrote {args.export}")


def cmd_calibrate(args, out: _Out) -> None:
    rep = replab.calibrate()
    out.data.update(rep.to_dict())
    out.line(f"frozen wedge order: {rep.frozen_order}  (F(e_a) = i (e_(a-1) x e_(a+1) - e_(a+1) x e_(a-1)))")
    for order, rels in rep.relations.items():
        out.line(f"order {order}:")
        for r in rels:
            out.line(f"  {r.name:8s} printed: {r.printed:42s} measured: {r.measured}")
    for k, v in rep.hom_dimensions.items():
        out.line(f"dim {k} = {v}")
    out.check("Ft F = 2 I under the frozen order", rep.scalar("FtF") == 2)
    out.check("dim hom(V, V^2) = dim hom(V^2, V) = 1", rep.hom_dimensions["hom(V^1,V^2)"] == 1 and rep.hom_dimensions["hom(V^2,V^1)"] == 1)


def cmd_bench(args, out: _Out) -> None:
    names = args.names or ["tetrahedron", "octahedron", "icosahedron"]
    rows = []
    for nm in names:
        tri = surface.random_sphere(int(nm[7:-1]), args.seed, args.flips) if nm.startswith("random(") else surface.preset(nm)
        plan = sweep.plan_sweep(tri)
        rep, t_engine = _timed(holonomy.run_sweep, tri, plan)
        row = {
            "name": nm,
            "t1": tri.t1,
            "K": rep.K,
            "ops_count": rep.ops_count,
            "peak_support": rep.peak_support,
            "naive_products": rep.naive_products,
            "reduction": round(rep.naive_products / max(rep.ops_count, 1), 1),
            "engine_s": round(t_engine, 4),
        }
        if not args.no_oracle:
            res, t_oracle = _timed(penrose.count_good, tri, args.budget)
            row["oracle_K"] = res.K
            row["oracle_s"] = round(t_oracle, 4)
            out.check(f"{nm}: oracle == engine", res.K == rep.K, f"{res.K} vs {rep.K}")
        rows.append(row)
        out.line(
            f"{nm:18s} K={rep.K:<8d} ops={rep.ops_count:<10d} peak={rep.peak_support:<8d} "
            f"reduction={row['reduction']:<14} engine {row['engine_s']} s"
            + (f", oracle {row['oracle_s']} s" if "oracle_s" in row else "")
        )
    out.data["rows"] = rows


# ---------------------------------------------------------------------------
# parser


def _add_input(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input")
    g.add_argument("--preset", help=f"one of {', '.join(surface.PRESET_NAMES)}")
    g.add_argument("--input", help="a .tri or .json triangulation")
    g.add_argument("--random", type=int, metavar="N", help="random sphere with N triangles")
    g.add_argument("--seed", type=int, default=0, help="seed for --random (default 0)")
    g.add_argument("--flips", type=int, default=0, help="random edge flips for --random (default 0)")


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chromstack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str, needs_input: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        if needs_input:
            _add_input(p)
        p.add_argument("--json", action="store_true", help="print one JSON object")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings")
        p.add_argument("--budget", type=_positive, default=penrose.DEFAULT_BUDGET, help="oracle search node budget")
        p.set_defaults(func=fn)
        return p

    p = add("index", cmd_index, "chromatic index K")
    p.add_argument("--oracle", action="store_true", help="pruned search (default)")
    p.add_argument("--engine", action="store_true", help="sweep transfer matrices")
    p.add_argument("--both", action="store_true", help="oracle and engine, checked equal")
    p.add_argument("--literal", action="store_true", help="unpruned sum over all labelings (t1 <= 13)")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--plan", help="plan JSON file, or 'reference'")

    p = add("colourings", cmd_colourings, "number (and list) of good face colourings of the dual")
    p.add_argument("--engine", action="store_true")
    p.add_argument("--plan")
    p.add_argument("--list", action="store_true")
    p.add_argument("--limit", type=int, default=0, help="stop listing after this many (0: all)")

    p = add("enumerate", cmd_enumerate, "good labelings with their sign statistics")
    p.add_argument("--limit", type=int, default=20, help="labelings to print (0: all); all are counted")

    p = add("plan", cmd_plan, "find and verify a sweeping loop")
    p.add_argument("--base", help="base edge as 'x,y'")
    p.add_argument("--width-cap", type=_positive)
    p.add_argument("--tie-break", choices=("lex", "revlex"), default="lex")
    p.add_argument("--optimize", choices=("first", "power", "width"), default="first")
    p.add_argument("--plan-budget", type=_positive, default=sweep.DEFAULT_PLAN_BUDGET)
    p.add_argument("--plan", help="verify this plan JSON (or 'reference') instead of searching")
    p.add_argument("--out", help="write the plan JSON here")

    p = add("holonomy", cmd_holonomy, "run the sweep engine")
    p.add_argument("--plan", help="plan JSON file, or 'reference'")
    p.add_argument("--trace-states", action="store_true", help="print every state of the e_1 start")
    p.add_argument("--convention", choices=holonomy.CONVENTIONS, help="default: unsigned with --trace-states, else coherent")

    p = add("audit", cmd_audit, "build the global section and its certificates")
    p.add_argument("--plan", help="plan JSON file, or 'reference' (default: smallest-power plan)")
    p.add_argument("--zero-edge", action="append", metavar="x,y", help="force the arrows on this edge to zero")
    p.add_argument("--no-equivariance", action="store_true", help="skip the intertwiner check")
    p.add_argument("--export", help="write the section JSON (words and matrix triplets) here")

    add("calibrate", cmd_calibrate, "measure the operator relations and freeze the convention", needs_input=False)

    p = add("bench", cmd_bench, "oracle vs engine timings", needs_input=False)
    p.add_argument("names", nargs="*", help="presets or random(N); default tetrahedron octahedron icosahedron")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--flips", type=int, default=0)
    p.add_argument("--no-oracle", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.json, args.timings or args.command == "bench")
    out.data["command"] = args.command
    try:
        args.func(args, out)
    except (holonomy.PlanInvalid, section.SectionError) as exc:
        print(f"chromstack: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (ValueError, KeyError, OSError, surface.TriangulationError) as exc:
        print(f"chromstack: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (penrose.BudgetExceeded, sweep.PlanningError) as exc:
        print(f"chromstack: {exc}", file=sys.stderr)
        return EXIT_CHECK
    return out.emit()


if __name__ == "__main__":
    sys.exit(main())
