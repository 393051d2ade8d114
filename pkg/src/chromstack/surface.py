"""Oriented spherical triangulations and their trivalent duals.

Vertex ids are opaque strings, ordered lexicographically wherever a
deterministic choice is needed.  Edges are sorted pairs, oriented edges are
ordered pairs, and a triangle is an ordered triple whose cyclic order carries
its orientation.
"""

from __future__ import annotations

import json
import random
import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "Triangulation",
    "PolyhedralMap",
    "TrivalentPolyhedron",
    "ValidationReport",
    "TriangulationError",
    "OrientationError",
    "MapError",
    "validate",
    "orient",
    "dualize",
    "map_dual",
    "truncate",
    "preset",
    "PRESET_NAMES",
    "random_sphere",
    "read_tri",
    "write_tri",
    "read_json",
    "write_json",
    "load",
    "save",
    "edge_key",
    "rotate_min",
]

Edge = tuple[str, str]
Tri = tuple[str, str, str]


class TriangulationError(ValueError):
    pass


class OrientationError(TriangulationError):
    def __init__(self, message: str, cycle: Sequence[Edge] = ()):
        super().__init__(message)
        self.cycle = tuple(cycle)


class MapError(ValueError):
    pass


def edge_key(x: str, y: str) -> Edge:
    return (x, y) if x <= y else (y, x)


def rotate_min(face: Sequence[str]) -> tuple[str, ...]:
    """Cyclic rotation of ``face`` starting at its smallest vertex."""
    k = min(range(len(face)), key=lambda i: face[i])
    return tuple(face[k:]) + tuple(face[:k])


@dataclass(frozen=True)
class Triangulation:
    vertices: tuple[str, ...]
    triangles: tuple[Tri, ...]

    @classmethod
    def from_triangles(cls, triangles: Iterable[Sequence[str]], vertices: Iterable[str] | None = None):
        tris = tuple(tuple(str(v) for v in t) for t in triangles)
        for t in tris:
            if len(t) != 3:
                raise TriangulationError(f"triangle {t} does not have three vertices")
        if vertices is None:
            verts = sorted({v for t in tris for v in t})
        else:
            verts = sorted({str(v) for v in vertices})
        return cls(tuple(verts), tris)  # type: ignore[arg-type]

    @property
    def t0(self) -> int:
        return len(self.vertices)

    @property
    def t1(self) -> int:
        return len(self.edges)

    @property
    def t2(self) -> int:
        return len(self.triangles)

    @property
    def euler_characteristic(self) -> int:
        return self.t0 - self.t1 + self.t2

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted({edge_key(t[i], t[(i + 1) % 3]) for t in self.triangles for i in range(3)}))

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    @cached_property
    def edge_triangles(self) -> dict[Edge, tuple[int, ...]]:
        """Triangle indices containing each edge."""
        acc: dict[Edge, list[int]] = defaultdict(list)
        for k, t in enumerate(self.triangles):
            for i in range(3):
                acc[edge_key(t[i], t[(i + 1) % 3])].append(k)
        return {e: tuple(v) for e, v in acc.items()}

    @cached_property
    def triangle_lookup(self) -> dict[frozenset, int]:
        return {frozenset(t): k for k, t in enumerate(self.triangles)}

    @cached_property
    def neighbours(self) -> dict[str, frozenset]:
        acc: dict[str, set] = {v: set() for v in self.vertices}
        for x, y in self.edges:
            acc.setdefault(x, set()).add(y)
            acc.setdefault(y, set()).add(x)
        return {v: frozenset(s) for v, s in acc.items()}

    def triangle_edges(self, k: int) -> tuple[Edge, Edge, Edge]:
        """Edges ``(xy, yz, zx)`` of triangle ``k`` as sorted pairs, in orientation order."""
        x, y, z = self.triangles[k]
        return edge_key(x, y), edge_key(y, z), edge_key(z, x)

    def orientation_sign(self, x: str, y: str, z: str) -> int:
        """+1 if ``(x, y, z)`` is a cyclic rotation of the stored triangle, -1 if reversed."""
        k = self.triangle_lookup.get(frozenset((x, y, z)))
        if k is None:
            raise TriangulationError(f"{{{x},{y},{z}}} is not a triangle")
        t = self.triangles[k]
        rots = {t, (t[1], t[2], t[0]), (t[2], t[0], t[1])}
        return 1 if (x, y, z) in rots else -1

    def reversed(self) -> "Triangulation":
        return Triangulation(self.vertices, tuple((t[0], t[2], t[1]) for t in self.triangles))

    def canonical(self) -> frozenset:
        """Orientation-aware canonical form: set of triangles rotated to their minimum vertex."""
        return frozenset(rotate_min(t) for t in self.triangles)

    def __str__(self):
        return f"Triangulation(t0={self.t0}, t1={self.t1}, t2={self.t2})"


@dataclass
class ValidationReport:
    ok: bool
    problems: list[str]
    orientation_problems: list[str]
    t0: int
    t1: int
    t2: int

    @property
    def euler(self) -> int:
        return self.t0 - self.t1 + self.t2

    def raise_if_failed(self, allow_orientation: bool = False) -> None:
        bad = list(self.problems)
        if not allow_orientation:
            bad += self.orientation_problems
        if bad:
            raise TriangulationError("invalid triangulation: " + "; ".join(bad))

    def __str__(self):
        if self.ok:
            return f"pass (t0={self.t0}, t1={self.t1}, t2={self.t2})"
        return "fail: " + "; ".join(self.problems + self.orientation_problems)


def _is_single_cycle(pairs: list[Edge]) -> bool:
    adj: dict[str, list[str]] = defaultdict(list)
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    if any(len(n) != 2 for n in adj.values()) or not adj:
        return False
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def validate(tri: Triangulation) -> ValidationReport:
    problems: list[str] = []
    orient_problems: list[str] = []

    seen_sets: dict[frozenset, Tri] = {}
    for t in tri.triangles:
        if len(set(t)) != 3:
            problems.append(f"triangle {''.join(t)} repeats a vertex")
            continue
        key = frozenset(t)
        if key in seen_sets:
            problems.append(f"triangle {''.join(t)} repeats {''.join(seen_sets[key])}")
        seen_sets[key] = t

    used = {v for t in tri.triangles for v in t}
    for v in tri.vertices:
        if v not in used:
            problems.append(f"vertex {v} lies in no triangle")

    for e, ks in sorted(tri.edge_triangles.items()):
        if len(ks) != 2:
            problems.append(f"edge {e[0]}{e[1]} lies in {len(ks)} triangle{'s' if len(ks) != 1 else ''}, not 2")

    directed: dict[Edge, int] = {}
    for k, t in enumerate(tri.triangles):
        for i in range(3):
            d = (t[i], t[(i + 1) % 3])
            if d in directed:
                other = tri.triangles[directed[d]]
                orient_problems.append(
                    f"edge {d[0]}{d[1]} has the same direction in {''.join(other)} and {''.join(t)}"
                )
            directed[d] = k

    if tri.vertices:
        start = tri.vertices[0]
        comp = {start}
        queue = deque([start])
        while queue:
            for w in tri.neighbours.get(queue.popleft(), ()):
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        if len(comp) != len(used | set(tri.vertices)):
            problems.append("underlying graph is not connected")

    if tri.euler_characteristic != 2:
        problems.append(f"Euler characteristic is {tri.euler_characteristic}, not 2")
    if 3 * tri.t2 != 2 * tri.t1:
        problems.append(f"3*t2 = {3 * tri.t2} differs from 2*t1 = {2 * tri.t1}")

    if not problems:
        links: dict[str, list[Edge]] = defaultdict(list)
        for t in tri.triangles:
            for i in range(3):
                links[t[i]].append((t[(i + 1) % 3], t[(i + 2) % 3]))
        for v in tri.vertices:
            if not _is_single_cycle(links[v]):
                problems.append(f"link of vertex {v} is not a single cycle")

    return ValidationReport(
        ok=not problems and not orient_problems,
        problems=problems,
        orientation_problems=orient_problems,
        t0=tri.t0,
        t1=tri.t1,
        t2=tri.t2,
    )


def orient(tri: Triangulation) -> Triangulation:
    """Coherently reorient every triangle, keeping the first triangle as given.

    Orientation is propagated breadth-first across shared edges.  A conflict
    means the surface is not orientable; the error carries the closed chain of
    edges through which the two propagation fronts met.
    """
    for e, ks in sorted(tri.edge_triangles.items()):
        if len(ks) != 2:
            raise TriangulationError(f"edge {e[0]}{e[1]} lies in {len(ks)} triangle(s), not 2")
    n = tri.t2
    flip: list[int | None] = [None] * n
    parent: list[tuple[int, Edge] | None] = [None] * n
    flip[0] = 0

    def oriented(k: int) -> Tri:
        t = tri.triangles[k]
        return t[::-1] if flip[k] else t

    def chain(k: int) -> list[Edge]:
        out = []
        while parent[k] is not None:
            k, e = parent[k]
            out.append(e)
        return out

    queue = deque([0])
    while queue:
        k = queue.popleft()
        t = oriented(k)
        for i in range(3):
            x, y = t[i], t[(i + 1) % 3]
            for m in tri.edge_triangles[edge_key(x, y)]:
                if m == k:
                    continue
                s = tri.triangles[m]
                want_flip = 0 if (y, x) in ((s[0], s[1]), (s[1], s[2]), (s[2], s[0])) else 1
                if flip[m] is None:
                    flip[m] = want_flip
                    parent[m] = (k, edge_key(x, y))
                    queue.append(m)
                elif flip[m] != want_flip:
                    cyc = list(reversed(chain(k))) + [edge_key(x, y)] + chain(m)
                    raise OrientationError(
                        "surface is not orientable; inconsistent edge cycle: "
                        + " -> ".join(a + b for a, b in cyc),
                        cyc,
                    )
    out = Triangulation(tri.vertices, tuple(oriented(k) for k in range(n)))
    validate(out).raise_if_failed()
    return out


# ---------------------------------------------------------------------------
# polyhedral maps, duality and truncation


@dataclass(frozen=True)
class PolyhedralMap:
    """Map on the sphere given by coherently oriented faces (cyclic vertex tuples)."""

    faces: tuple[tuple[str, ...], ...]
    face_names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.face_names is not None and len(self.face_names) != len(self.faces):
            raise MapError("face_names must match faces")

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted({v for f in self.faces for v in f}))

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted({edge_key(f[i], f[(i + 1) % len(f)]) for f in self.faces for i in range(len(f))}))

    @cached_property
    def degree(self) -> dict[str, int]:
        deg: dict[str, int] = defaultdict(int)
        for x, y in self.edges:
            deg[x] += 1
            deg[y] += 1
        return dict(deg)

    @property
    def names(self) -> tuple[str, ...]:
        return self.face_names if self.face_names is not None else tuple(f"f{k}" for k in range(len(self.faces)))

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.faces)

    def problems(self) -> list[str]:
        out = []
        directed: set[Edge] = set()
        sides: dict[Edge, int] = defaultdict(int)
        for f in self.faces:
            if len(f) < 3:
                out.append(f"face {f} has fewer than 3 sides")
            if len(set(f)) != len(f):
                out.append(f"face {f} repeats a vertex")
            for i in range(len(f)):
                d = (f[i], f[(i + 1) % len(f)])
                if d in directed:
                    out.append(f"multi-edge or incoherent orientation at {d[0]}{d[1]}")
                directed.add(d)
                sides[edge_key(*d)] += 1
        for e, c in sorted(sides.items()):
            if c != 2:
                out.append(f"edge {e[0]}{e[1]} borders {c} faces, not 2")
        v, e, f = self.counts
        if v - e + f != 2:
            out.append(f"Euler formula fails: {v} - {e} + {f} != 2")
        return out

    def rotation(self, v: str) -> tuple[int, ...]:
        """Indices of the faces around ``v`` in cyclic order."""
        succ: dict[str, tuple[str, int]] = {}
        for k, f in enumerate(self.faces):
            n = len(f)
            for i in range(n):
                if f[i] == v:
                    prev, nxt = f[i - 1], f[(i + 1) % n]
                    succ[nxt] = (prev, k)
        if not succ:
            return ()
        start = min(succ)
        out, cur = [], start
        while True:
            cur, k = succ[cur]
            out.append(k)
            if cur == start:
                break
            if len(out) > len(succ):
                raise MapError(f"neighbourhood of {v} is not a disk")
        return tuple(out)

    def to_triangulation(self) -> Triangulation:
        if any(len(f) != 3 for f in self.faces):
            raise MapError("not every face is a triangle")
        return Triangulation.from_triangles(self.faces)


@dataclass(frozen=True)
class TrivalentPolyhedron(PolyhedralMap):
    def __post_init__(self):
        super().__post_init__()
        bad = sorted(v for v, d in self.degree.items() if d != 3)
        if bad:
            raise MapError(f"vertices {bad} do not have degree 3")


def _tri_name(t: Sequence[str]) -> str:
    return "-".join(rotate_min(t))


def dualize(tri: Triangulation) -> TrivalentPolyhedron:
    """Dual map: one vertex per triangle, one face per vertex (named by it)."""
    validate(tri).raise_if_failed()
    names = [_tri_name(t) for t in tri.triangles]
    tri_map = PolyhedralMap(tri.triangles)
    faces, face_names = [], []
    for v in tri.vertices:
        ring = tri_map.rotation(v)
        faces.append(tuple(names[k] for k in reversed(ring)))
        face_names.append(v)
    return TrivalentPolyhedron(tuple(faces), tuple(face_names))


def map_dual(poly: PolyhedralMap) -> PolyhedralMap:
    """Dual of a polyhedral map; faces of the result are named by the vertices of ``poly``."""
    names = poly.names
    faces, face_names = [], []
    for v in poly.vertices:
        ring = poly.rotation(v)
        faces.append(tuple(names[k] for k in reversed(ring)))
        face_names.append(v)
    return PolyhedralMap(tuple(faces), tuple(face_names))


def truncate(poly: PolyhedralMap) -> TrivalentPolyhedron:
    """Replace every vertex of degree d > 3 by a d-gon face.

    The new vertex on edge ``v-p`` next to ``v`` is named ``"v~p"``.
    """
    probs = poly.problems()
    if probs:
        raise MapError("; ".join(probs))
    low = sorted(v for v, d in poly.degree.items() if d < 3)
    if low:
        raise MapError(f"vertices {low} have degree < 3")
    big = {v for v, d in poly.degree.items() if d > 3}
    if not big:
        return TrivalentPolyhedron(poly.faces, poly.face_names)

    new_faces: list[tuple[str, ...]] = []
    succ: dict[str, dict[str, str]] = defaultdict(dict)
    for f in poly.faces:
        out: list[str] = []
        n = len(f)
        for i, v in enumerate(f):
            if v in big:
                p, q = f[i - 1], f[(i + 1) % n]
                a, b = f"{v}~{p}", f"{v}~{q}"
                out.extend((a, b))
                succ[v][b] = a
            else:
                out.append(v)
        new_faces.append(tuple(out))
    names = list(poly.names)
    for v in sorted(big):
        start = min(succ[v])
        ring, cur = [start], succ[v][start]
        while cur != start:
            ring.append(cur)
            cur = succ[v][cur]
        new_faces.append(tuple(ring))
        names.append(v)
    return TrivalentPolyhedron(tuple(new_faces), tuple(names))


# ---------------------------------------------------------------------------
# presets

_TETRAHEDRON = """\
tri v=4 f=4
a b c
a c d
a d b
b d c
"""

# Outer triangle a,b,c; inner triangle d,e,f with e near ab, d near ac, f near bc.
_OCTAHEDRON = """\
tri v=6 f=8
a e b
a d e
e f b
d f e
d c f
a c d
c b f
a b c
"""

_ICOSAHEDRON = """\
tri v=12 f=20
a b c
a c d
a d e
a e f
a f b
b g c
c g h
c h d
d h i
d i e
e i j
e j f
f j k
f k b
b k g
l h g
l i h
l j i
l k j
l g k
"""

PRESET_NAMES = ("tetrahedron", "octahedron", "icosahedron", "bipyramid(n)", "double-wheel(n)")

_PARAM = re.compile(r"^\s*([a-z-]+)\s*(?:\(\s*(\d+)\s*\))?\s*$")


def _bipyramid(n: int) -> Triangulation:
    if n < 3:
        raise TriangulationError("bipyramid needs n >= 3")
    ring = [f"v{i:02d}" for i in range(n)]
    tris = []
    for i in range(n):
        u, w = ring[i], ring[(i + 1) % n]
        tris.append(("n", u, w))
        tris.append(("s", w, u))
    return Triangulation.from_triangles(tris)


def _double_wheel(n: int) -> Triangulation:
    """Hub + inner n-cycle + outer n-cycle + pole, with a zigzag band between the cycles."""
    if n < 3:
        raise TriangulationError("double-wheel needs n >= 3")
    inner = [f"u{i:02d}" for i in range(n)]
    outer = [f"w{i:02d}" for i in range(n)]
    tris = []
    for i in range(n):
        j = (i + 1) % n
        tris.append(("h", inner[i], inner[j]))
        tris.append((inner[j], inner[i], outer[i]))
        tris.append((inner[j], outer[i], outer[j]))
        tris.append(("p", outer[j], outer[i]))
    return Triangulation.from_triangles(tris)


def preset(name: str) -> Triangulation:
    m = _PARAM.match(name)
    if not m:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    base, arg = m.group(1), m.group(2)
    fixed = {"tetrahedron": _TETRAHEDRON, "octahedron": _OCTAHEDRON, "icosahedron": _ICOSAHEDRON}
    if base in fixed and arg is None:
        return read_tri(fixed[base])
    if base == "bipyramid" and arg is not None:
        return _bipyramid(int(arg))
    if base in ("double-wheel", "doublewheel") and arg is not None:
        return _double_wheel(int(arg))
    raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")


def random_sphere(n_triangles: int, seed: int = 0, flips: int = 0) -> Triangulation:
    """Random sphere by stellar subdivision of the tetrahedron.

    ``n_triangles`` must be even and >= 4.  Optional random edge flips
    (rejected when they would create a multi-edge or a degree-2 vertex) add
    variety beyond stacked triangulations.
    """
    if n_triangles < 4 or n_triangles % 2:
        raise ValueError("a sphere triangulation has an even number >= 4 of triangles")
    rng = random.Random(seed)
    tris: list[Tri] = list(preset("tetrahedron").triangles)
    k = 0
    while len(tris) < n_triangles:
        x, y, z = tris.pop(rng.randrange(len(tris)))
        w = f"x{k:03d}"
        k += 1
        tris.extend([(x, y, w), (y, z, w), (z, x, w)])
    for _ in range(flips):
        tris = _random_flip(tris, rng)
    return Triangulation.from_triangles(tris)


def _random_flip(tris: list[Tri], rng: random.Random) -> list[Tri]:
    where: dict[Edge, int] = {}
    for k, t in enumerate(tris):
        for i in range(3):
            where[(t[i], t[(i + 1) % 3])] = k
    adj: dict[str, set] = defaultdict(set)
    for x, y in where:
        adj[x].add(y)
    x, y = rng.choice(sorted(where))
    k1, k2 = where[(x, y)], where[(y, x)]
    z = next(v for v in tris[k1] if v not in (x, y))
    w = next(v for v in tris[k2] if v not in (x, y))
    if w in adj[z] or len(adj[x]) <= 3 or len(adj[y]) <= 3:
        return tris
    out = [t for k, t in enumerate(tris) if k not in (k1, k2)]
    out.extend([(z, x, w), (w, y, z)])
    return out


# ---------------------------------------------------------------------------
# file formats

_HEADER = re.compile(r"^tri\s+v=(\d+)\s+f=(\d+)\s*$")


def read_tri(text: str) -> Triangulation:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise TriangulationError("empty .tri input")
    m = _HEADER.match(lines[0])
    if not m:
        raise TriangulationError(f"bad .tri header {lines[0]!r}; expected 'tri v=<t0> f=<t2>'")
    t0, t2 = int(m.group(1)), int(m.group(2))
    tris = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise TriangulationError(f"triangle line {line!r} does not name three vertices")
        tris.append(tuple(parts))
    tri = Triangulation.from_triangles(tris)
    if tri.t2 != t2 or tri.t0 != t0:
        raise TriangulationError(f"header says v={t0} f={t2} but body has v={tri.t0} f={tri.t2}")
    return tri


def write_tri(tri: Triangulation) -> str:
    body = "".join(" ".join(t) + "\n" for t in tri.triangles)
    return f"tri v={tri.t0} f={tri.t2}\n" + body


def read_json(text: str) -> Triangulation:
    data = json.loads(text)
    try:
        verts, tris = data["vertices"], data["triangles"]
    except (KeyError, TypeError) as exc:
        raise TriangulationError("JSON triangulation needs 'vertices' and 'triangles'") from exc
    return Triangulation.from_triangles(tris, vertices=verts)


def write_json(tri: Triangulation) -> str:
    return json.dumps({"vertices": list(tri.vertices), "triangles": [list(t) for t in tri.triangles]}) + "\n"


def load(path: str | Path) -> Triangulation:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return read_json(text)
    return read_tri(text)


def save(tri: Triangulation, path: str | Path) -> None:
    path = Path(path)
    path.write_text(write_json(tri) if path.suffix.lower() == ".json" else write_tri(tri))
