"""Edge-paths, elementary two-moves, and planning of sweeping loops.

A sweep starts from the one-edge path ``(a, b)`` and changes the path one
triangle at a time.  An insertion puts an apex ``y`` between ``x_j`` and
``x_{j+1}``; a deletion removes an interior vertex ``x_k`` whose neighbours
span a triangle with it.  A sweeping loop returns to ``(a, b)`` after
crossing every triangle exactly once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .surface import Edge, Triangulation, TriangulationError, edge_key, validate

__all__ = [
    "EdgePath",
    "TwoMove",
    "SweepPlan",
    "PlanReport",
    "DiskTriangulation",
    "MoveError",
    "PlanningError",
    "apply_move",
    "move_orientation",
    "plan_from_paths",
    "plan_sweep",
    "verify_plan",
    "cut_along_base",
    "default_base",
    "vertex_powers",
    "plan_best",
    "DEFAULT_PLAN_BUDGET",
    "REFERENCE_PATHS",
    "reference_plan",
]

EdgePath = tuple[str, ...]

DEFAULT_PLAN_BUDGET = 10**7

# hand-made sweeps of the presets, given as successive edge-paths
REFERENCE_PATHS = {
    "octahedron": ("ab", "aeb", "adeb", "adefb", "adfb", "adcfb", "acfb", "acb", "ab"),
}


class MoveError(ValueError):
    pass


class PlanningError(RuntimeError):
    def __init__(self, message: str, best: "SweepPlan | None" = None, frontier: EdgePath | None = None):
        super().__init__(message)
        self.best = best
        self.frontier = frontier


@dataclass(frozen=True)
class TwoMove:
    kind: str  # "I" (insert) or "D" (delete)
    pos: int
    vertex: str
    triangle: tuple[str, str, str]  # (left, apex, right) in path order

    def __post_init__(self):
        if self.kind not in ("I", "D"):
            raise MoveError(f"move kind must be 'I' or 'D', not {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "pos": self.pos, "vertex": self.vertex, "triangle": list(self.triangle)}

    @classmethod
    def from_dict(cls, d: dict) -> "TwoMove":
        return cls(str(d["kind"]), int(d["pos"]), str(d["vertex"]), tuple(str(v) for v in d["triangle"]))

    def inverse_at(self) -> "TwoMove":
        """The move undoing this one (insert at j  <->  delete at j+1)."""
        if self.kind == "I":
            return TwoMove("D", self.pos + 1, self.vertex, self.triangle)
        return TwoMove("I", self.pos - 1, self.vertex, self.triangle)


def apply_move(path: Sequence[str], move: TwoMove, tri: Triangulation | None = None) -> EdgePath:
    """Apply one insertion or deletion; with ``tri`` also check the triangle exists."""
    path = tuple(path)
    n = len(path) - 1
    if move.kind == "I":
        j = move.pos
        if not 0 <= j < n:
            raise MoveError(f"insert position {j} outside 0..{n - 1} for path {path}")
        x, y, z = path[j], move.vertex, path[j + 1]
        if not (x != y and y != z and z != x):
            raise MoveError(f"insert needs x_j != y != x_j+1 != x_j, got ({x}, {y}, {z})")
        if set(move.triangle) != {x, y, z} or move.triangle[1] != y:
            raise MoveError(f"move triangle {move.triangle} is not ({x}, {y}, {z})")
        if tri is not None and frozenset((x, y, z)) not in tri.triangle_lookup:
            raise MoveError(f"{{{x},{y},{z}}} is not a triangle: {x}{y} or {y}{z} is not a side next to {x}{z}")
        return path[: j + 1] + (y,) + path[j + 1 :]
    k = move.pos
    if not 1 <= k < n:
        raise MoveError(f"delete position {k} outside 1..{n - 1} for path {path}")
    x, y, z = path[k - 1], path[k], path[k + 1]
    if y != move.vertex:
        raise MoveError(f"delete expects {move.vertex} at position {k}, found {y}")
    if x == z:
        raise MoveError(f"delete would join {x} to itself")
    if set(move.triangle) != {x, y, z} or move.triangle[1] != y:
        raise MoveError(f"move triangle {move.triangle} is not ({x}, {y}, {z})")
    if tri is not None:
        if z not in tri.neighbours.get(x, ()):
            raise MoveError(f"delete needs {x} adjacent to {z}")
        if frozenset((x, y, z)) not in tri.triangle_lookup:
            raise MoveError(f"{{{x},{y},{z}}} is not a triangle")
    return path[:k] + path[k + 1 :]


def move_orientation(tri: Triangulation, move: TwoMove) -> int:
    """+1 when (left, apex, right) agrees with the stored orientation of the swept triangle."""
    return tri.orientation_sign(*move.triangle)


@dataclass(frozen=True)
class SweepPlan:
    base: tuple[str, str]
    moves: tuple[TwoMove, ...]

    @property
    def paths(self) -> list[EdgePath]:
        out = [tuple(self.base)]
        for m in self.moves:
            out.append(apply_move(out[-1], m))
        return out

    @property
    def peak_length(self) -> int:
        return max(len(p) - 1 for p in self.paths)

    def to_json(self) -> str:
        return json.dumps({"base": list(self.base), "moves": [m.to_dict() for m in self.moves]}) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SweepPlan":
        d = json.loads(text)
        return cls(tuple(d["base"]), tuple(TwoMove.from_dict(m) for m in d["moves"]))


def plan_from_paths(tri: Triangulation, paths: Sequence[Sequence[str]]) -> SweepPlan:
    """Recover the move sequence from a list of successive edge-paths."""
    paths = [tuple(p) for p in paths]
    moves = []
    for p, q in zip(paths, paths[1:]):
        if len(q) == len(p) + 1:
            j = next((i for i in range(len(p)) if p[i] != q[i]), len(p)) - 1
            y = q[j + 1]
            m = TwoMove("I", j, y, (q[j], y, q[j + 2]))
        elif len(q) == len(p) - 1:
            k = next((i for i in range(len(q)) if p[i] != q[i]), len(q))
            m = TwoMove("D", k, p[k], (p[k - 1], p[k], p[k + 1]))
        else:
            raise MoveError(f"paths {p} and {q} do not differ by one vertex")
        if apply_move(p, m, tri) != q:
            raise MoveError(f"paths {p} and {q} do not bound a single triangle")
        moves.append(m)
    return SweepPlan((paths[0][0], paths[0][-1]), tuple(moves))


def reference_plan(name: str, tri: Triangulation) -> SweepPlan:
    if name not in REFERENCE_PATHS:
        raise KeyError(f"no reference plan for {name!r}; available: {', '.join(REFERENCE_PATHS)}")
    return plan_from_paths(tri, [tuple(p) for p in REFERENCE_PATHS[name]])


def default_base(tri: Triangulation) -> tuple[str, str]:
    return tri.edges[0]


@dataclass
class PlanReport:
    ok: bool
    problems: list[str]
    steps: list[tuple[int, tuple[str, str, str]]] = field(default_factory=list)
    n_insert: int = 0
    n_delete: int = 0
    peak_length: int = 0
    orientations: list[int] = field(default_factory=list)

    def __str__(self):
        head = "pass" if self.ok else "fail: " + "; ".join(self.problems)
        lines = [head] + [f"  step {s}: {''.join(t)}" for s, t in self.steps]
        return "\n".join(lines)


def verify_plan(tri: Triangulation, plan: SweepPlan) -> PlanReport:
    """Replay ``plan`` and check every sweeping-loop invariant; never raises."""
    problems: list[str] = []
    rep = validate(tri)
    if not rep.ok:
        return PlanReport(False, ["triangulation: " + str(rep)])
    a, b = plan.base
    if edge_key(a, b) not in tri.edge_index:
        problems.append(f"base {a}{b} is not an edge")
    path: EdgePath = (a, b)
    seen: dict[int, int] = {}
    steps, orients = [], []
    peak = 1
    for s, m in enumerate(plan.moves, 1):
        try:
            path = apply_move(path, m, tri)
        except MoveError as exc:
            problems.append(f"step {s}: {exc}")
            break
        peak = max(peak, len(path) - 1)
        k = tri.triangle_lookup[frozenset(m.triangle)]
        if k in seen:
            problems.append(f"triangle {''.join(m.triangle)} swept at steps {seen[k]} and {s}")
        seen[k] = s
        steps.append((s, m.triangle))
        orients.append(move_orientation(tri, m))
    unswept = [tri.triangles[k] for k in range(tri.t2) if k not in seen]
    if unswept:
        problems.append(f"{len(unswept)} triangle(s) unswept, e.g. {''.join(unswept[0])}")
    if path != (a, b):
        problems.append(f"endpoint mismatch: loop ends at {path}, not {(a, b)}")
    n_ins = sum(1 for m in plan.moves if m.kind == "I")
    n_del = len(plan.moves) - n_ins
    if n_ins != n_del:
        problems.append(f"{n_ins} insertions but {n_del} deletions")
    if len(plan.moves) != tri.t2:
        problems.append(f"{len(plan.moves)} moves for {tri.t2} triangles")
    return PlanReport(not problems, problems, steps, n_ins, n_del, peak, orients)


def plan_sweep(
    tri: Triangulation,
    base: Sequence[str] | None = None,
    *,
    width_cap: int | None = None,
    budget: int = DEFAULT_PLAN_BUDGET,
    tie_break: str = "lex",
    allow_repeats: bool = False,
) -> SweepPlan:
    """Depth-first search for a sweeping loop based at ``base``.

    Deletions are tried before insertions; candidates are ordered by
    triangle name (``tie_break="revlex"`` reverses that order).  Dead
    ``(path, swept)`` states are memoized.  Unless ``allow_repeats`` is set,
    paths never revisit a vertex, which keeps each vertex inserted once.
    """
    validate(tri).raise_if_failed()
    if base is None:
        base = default_base(tri)
    a, b = tuple(base)
    if edge_key(a, b) not in tri.edge_index:
        raise TriangulationError(f"base {a}{b} is not an edge")
    if tie_break not in ("lex", "revlex"):
        raise ValueError("tie_break must be 'lex' or 'revlex'")
    rev = tie_break == "revlex"
    full = (1 << tri.t2) - 1
    lookup = tri.triangle_lookup
    names = ["".join(sorted(t)) for t in tri.triangles]

    def candidates(path: EdgePath, swept: int) -> list[tuple[TwoMove, int]]:
        n = len(path) - 1
        dels, ins = [], []
        for k in range(1, n):
            x, y, z = path[k - 1], path[k], path[k + 1]
            if x == z:
                continue
            t = lookup.get(frozenset((x, y, z)))
            if t is not None and not swept >> t & 1:
                dels.append((names[t], k, TwoMove("D", k, y, (x, y, z)), t))
        if width_cap is None or n + 1 <= width_cap:
            onpath = set(path)
            for j in range(n):
                x, z = path[j], path[j + 1]
                for t in tri.edge_triangles[edge_key(x, z)]:
                    if swept >> t & 1:
                        continue
                    y = next(v for v in tri.triangles[t] if v not in (x, z))
                    if not allow_repeats and y in onpath:
                        continue
                    ins.append((-_enabled(path, j, y, swept | 1 << t), names[t], j, TwoMove("I", j, y, (x, y, z)), t))
        dels.sort(key=lambda c: (c[0], c[1]), reverse=rev)
        ins.sort(key=lambda c: (c[1], c[2]), reverse=rev)
        ins.sort(key=lambda c: c[0])
        return [(c[2], c[3]) for c in dels] + [(c[3], c[4]) for c in ins]

    def _enabled(path: EdgePath, j: int, y: str, swept: int) -> int:
        """Deletions that become legal right after inserting ``y`` after position ``j``."""
        count = 0
        if j >= 1:
            t = lookup.get(frozenset((path[j - 1], path[j], y)))
            if t is not None and path[j - 1] != y and not swept >> t & 1:
                count += 1
        if j + 2 < len(path):
            t = lookup.get(frozenset((y, path[j + 1], path[j + 2])))
            if t is not None and path[j + 2] != y and not swept >> t & 1:
                count += 1
        return count

    start: EdgePath = (a, b)
    dead: set[tuple[EdgePath, int]] = set()
    moves: list[TwoMove] = []
    stack = [(start, 0, candidates(start, 0), 0)]
    nodes = 0
    best: list[TwoMove] = []
    best_frontier = start
    while stack:
        path, swept, cands, i = stack[-1]
        if swept == full:
            if path == start:
                return SweepPlan((a, b), tuple(moves))
            dead.add((path, swept))
            stack.pop()
            if moves:
                moves.pop()
            continue
        if i == len(cands):
            dead.add((path, swept))
            stack.pop()
            if moves:
                moves.pop()
            continue
        stack[-1] = (path, swept, cands, i + 1)
        m, t = cands[i]
        nxt = apply_move(path, m)
        nswept = swept | (1 << t)
        if (nxt, nswept) in dead:
            continue
        nodes += 1
        if nodes > budget:
            raise PlanningError(
                f"no sweeping loop found within {budget} search nodes",
                SweepPlan((a, b), tuple(best)),
                best_frontier,
            )
        moves.append(m)
        if len(moves) > len(best):
            best, best_frontier = list(moves), nxt
        stack.append((nxt, nswept, candidates(nxt, nswept), 0))
    raise PlanningError("search space exhausted without a sweeping loop", SweepPlan((a, b), tuple(best)), best_frontier)


def vertex_powers(plan: SweepPlan) -> dict[str, int]:
    """Tensor power each vertex receives when a section is built along ``plan``.

    The base vertices get 1; an inserted apex gets one more than its right
    neighbour at the time of its first insertion.
    """
    path = list(plan.base)
    powers = {v: 1 for v in plan.base}
    for m in plan.moves:
        if m.kind == "I":
            powers.setdefault(m.vertex, 1 + powers[path[m.pos + 1]])
            path.insert(m.pos + 1, m.vertex)
        else:
            del path[m.pos]
    return powers


def plan_best(
    tri: Triangulation,
    objective: str = "power",
    *,
    width_cap: int | None = None,
    budget_per_base: int = 20000,
) -> SweepPlan:
    """Try every oriented base edge and both tie-breaks; keep the best plan.

    ``objective="power"`` minimizes (max vertex power, peak length), which
    keeps section matrices small; ``"width"`` minimizes (peak length, max
    vertex power), which keeps engine states small.  Ties go to the first
    candidate in edge order.
    """
    if objective not in ("power", "width"):
        raise ValueError("objective must be 'power' or 'width'")
    validate(tri).raise_if_failed()
    best: tuple[tuple[int, int], SweepPlan] | None = None
    for x, y in tri.edges:
        for base in ((x, y), (y, x)):
            for tb in ("lex", "revlex"):
                try:
                    plan = plan_sweep(tri, base, width_cap=width_cap, budget=budget_per_base, tie_break=tb)
                except PlanningError:
                    continue
                power = max(vertex_powers(plan).values())
                key = (power, plan.peak_length) if objective == "power" else (plan.peak_length, power)
                if best is None or key < best[0]:
                    best = (key, plan)
    if best is None:
        raise PlanningError(f"no base edge gave a sweeping loop within {budget_per_base} nodes each")
    return best[1]


@dataclass(frozen=True)
class DiskTriangulation:
    """A sphere cut open along its base edge.

    The triangles are unchanged; the base edge ``(a, b)`` becomes two
    boundary copies.  Copy 0 belongs to the triangle containing the
    directed edge a->b, copy 1 to the one containing b->a.
    """

    vertices: tuple[str, ...]
    triangles: tuple[tuple[str, str, str], ...]
    base: tuple[str, str]
    copy_owner: tuple[int, int]

    @property
    def interior_edges(self) -> tuple[Edge, ...]:
        e = edge_key(*self.base)
        return tuple(sorted({edge_key(t[i], t[(i + 1) % 3]) for t in self.triangles for i in range(3)} - {e}))

    @property
    def boundary(self) -> tuple[tuple[str, str, int], tuple[str, str, int]]:
        a, b = self.base
        return ((a, b, 0), (a, b, 1))

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - (len(self.interior_edges) + 2) + len(self.triangles)

    def reglue(self) -> Triangulation:
        return Triangulation(self.vertices, self.triangles)


def cut_along_base(tri: Triangulation, base: Sequence[str]) -> DiskTriangulation:
    validate(tri).raise_if_failed()
    a, b = tuple(base)
    owners = tri.edge_triangles.get(edge_key(a, b))
    if owners is None:
        raise TriangulationError(f"base {a}{b} is not an edge")

    def has(k: int, x: str, y: str) -> bool:
        t = tri.triangles[k]
        return (x, y) in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))

    k0 = next(k for k in owners if has(k, a, b))
    k1 = next(k for k in owners if k != k0)
    return DiskTriangulation(tri.vertices, tri.triangles, (a, b), (k0, k1))
