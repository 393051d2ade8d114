"""Ground-truth chromatic index by direct evaluation of the Penrose sum.

A labeling maps every edge of a triangulation to 1, 2 or 3 (standing for the
basis vectors e_1, e_2, e_3).  It is *good* when each triangle sees three
distinct labels, i.e. when no triangle determinant vanishes.  The chromatic
index K is the number of good labelings; it also equals

    sum over labelings u of  prod over triangles [xyz] of  i * det(u_xy, u_yz, u_zx)

with triangles taken in a coherent orientation.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .gaussian import GaussInt, i_power
from .surface import Edge, Triangulation, edge_key, validate

__all__ = [
    "EdgeLabeling",
    "FaceColouring",
    "COLOURS",
    "BudgetExceeded",
    "LabelingError",
    "OracleResult",
    "triangle_det",
    "is_good",
    "search_order",
    "count_good",
    "oracle_report",
    "chromatic_index",
    "enumerate_good",
    "literal_sum",
    "sign_stats",
    "tait_expand",
    "is_good_colouring",
    "format_labeling",
    "DEFAULT_BUDGET",
    "LITERAL_MAX_EDGES",
]

EdgeLabeling = dict[Edge, int]
FaceColouring = dict[str, str]

DEFAULT_BUDGET = 10**8
LITERAL_MAX_EDGES = 13

# Klein four-group elements as 2-bit ints; group sum is XOR.  Label l maps to element l.
COLOURS = ("W", "R", "G", "B")


class BudgetExceeded(RuntimeError):
    pass


class LabelingError(ValueError):
    pass


_EPS = np.zeros((4, 4, 4), dtype=np.int64)
for _a, _b, _c in itertools.permutations((1, 2, 3)):
    _inv = sum(1 for i, j in ((_a, _b), (_a, _c), (_b, _c)) if i > j)
    _EPS[_a, _b, _c] = -1 if _inv % 2 else 1


def triangle_det(a: int, b: int, c: int) -> int:
    """det(e_a, e_b, e_c): the Levi-Civita symbol with eps_123 = +1."""
    for v in (a, b, c):
        if v not in (1, 2, 3):
            raise LabelingError(f"label {v} not in {{1,2,3}}")
    return int(_EPS[a, b, c])


def _check_total(tri: Triangulation, u: Mapping[Edge, int]) -> None:
    missing = [e for e in tri.edges if e not in u]
    if missing:
        raise LabelingError(f"labeling is partial: {len(missing)} edges unlabelled, e.g. {missing[0]}")


def _dets(tri: Triangulation, u: Mapping[Edge, int]) -> list[int]:
    _check_total(tri, u)
    out = []
    for k in range(tri.t2):
        e1, e2, e3 = tri.triangle_edges(k)
        out.append(triangle_det(u[e1], u[e2], u[e3]))
    return out


def is_good(tri: Triangulation, u: Mapping[Edge, int]) -> bool:
    return all(_dets(tri, u))


def search_order(tri: Triangulation) -> list[Edge]:
    """Most-constrained-first edge order, ties broken lexicographically.

    An edge's constraint count is the number of already-ordered edges sharing
    a triangle with it.
    """
    remaining = set(tri.edges)
    score = {e: 0 for e in tri.edges}
    order: list[Edge] = []
    while remaining:
        best = min(remaining, key=lambda e: (-score[e], e))
        order.append(best)
        remaining.discard(best)
        for k in tri.edge_triangles[best]:
            for f in tri.triangle_edges(k):
                if f in remaining:
                    score[f] += 1
    return order


@dataclass
class OracleResult:
    K: int
    n_edges: int
    nodes_visited: int
    mod4_violations: int | None = None  # filled in by oracle_report

    def to_dict(self) -> dict:
        return {"K": self.K, "n_edges": self.n_edges, "nodes_visited": self.nodes_visited, "mod4_violations": self.mod4_violations}


class _Search:
    def __init__(self, tri: Triangulation, budget: int):
        self.order = search_order(tri)
        pos = {e: i for i, e in enumerate(self.order)}
        # for each position, positions of edges sharing a triangle with it
        self.partners: list[tuple[int, ...]] = []
        for e in self.order:
            ps = set()
            for k in tri.edge_triangles[e]:
                for f in tri.triangle_edges(k):
                    if f != e:
                        ps.add(pos[f])
            self.partners.append(tuple(sorted(ps)))
        self.budget = budget
        self.nodes = 0
        self.labels = [0] * len(self.order)

    def _allowed(self, i: int) -> tuple[int, ...]:
        used = {self.labels[j] for j in self.partners[i] if j < i}
        return tuple(c for c in (1, 2, 3) if c not in used)

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(
                f"oracle search exceeded its budget of {self.budget} nodes; "
                "use the sweep engine (holonomy) for larger triangulations"
            )

    def count(self, i: int = 0) -> int:
        if i == len(self.order):
            return 1
        total = 0
        for c in self._allowed(i):
            self._tick()
            self.labels[i] = c
            total += self.count(i + 1)
        self.labels[i] = 0
        return total

    def walk(self, i: int = 0) -> Iterator[EdgeLabeling]:
        if i == len(self.order):
            yield dict(zip(self.order, self.labels))
            return
        for c in self._allowed(i):
            self._tick()
            self.labels[i] = c
            yield from self.walk(i + 1)
        self.labels[i] = 0


def _count_with_first(args) -> tuple[int, int]:
    tri, budget, first = args
    s = _Search(tri, budget)
    if not s.order:
        return (1 if first == 1 else 0), 0
    s._tick()
    s.labels[0] = first
    return s.count(1), s.nodes


def _require_valid(tri: Triangulation) -> None:
    validate(tri).raise_if_failed()


def count_good(tri: Triangulation, budget: int = DEFAULT_BUDGET, workers: int = 1) -> OracleResult:
    """Pruned depth-first count of good labelings.

    With ``workers > 1`` the search splits on the first edge's label into three
    independent sub-searches run in separate processes; each gets the full
    node budget.
    """
    _require_valid(tri)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, 3)) as pool:
            parts = list(pool.map(_count_with_first, [(tri, budget, c) for c in (1, 2, 3)]))
        return OracleResult(sum(p[0] for p in parts), tri.t1, sum(p[1] for p in parts))
    s = _Search(tri, budget)
    k = s.count()
    return OracleResult(k, tri.t1, s.nodes)


def oracle_report(tri: Triangulation, budget: int = DEFAULT_BUDGET) -> OracleResult:
    """Count good labelings by enumeration, also tallying those with n+ - n- not divisible by 4."""
    _require_valid(tri)
    s = _Search(tri, budget)
    k = bad = 0
    for u in s.walk():
        k += 1
        plus, minus = sign_stats(tri, u)
        bad += (plus - minus) % 4 != 0
    return OracleResult(k, tri.t1, s.nodes, bad)


def literal_sum(tri: Triangulation, max_edges: int = LITERAL_MAX_EDGES) -> GaussInt:
    """Unpruned evaluation of the Penrose sum over all 3**t1 labelings."""
    _require_valid(tri)
    n = tri.t1
    if n > max_edges:
        raise BudgetExceeded(f"literal sum over 3^{n} labelings refused (limit t1 <= {max_edges})")
    labels = np.array(list(itertools.product((1, 2, 3), repeat=n)), dtype=np.int64).reshape(-1, n)
    idx = tri.edge_index
    prod = np.ones(labels.shape[0], dtype=np.int64)
    for k in range(tri.t2):
        e1, e2, e3 = (idx[e] for e in tri.triangle_edges(k))
        prod *= _EPS[labels[:, e1], labels[:, e2], labels[:, e3]]
    return i_power(tri.t2) * int(prod.sum())


def chromatic_index(tri: Triangulation, budget: int = DEFAULT_BUDGET, literal: bool = False, workers: int = 1) -> int:
    if literal:
        value = literal_sum(tri)
        if not value.is_real():
            raise ArithmeticError(f"Penrose sum {value} is not real; is the orientation coherent?")
        return value.re
    return count_good(tri, budget, workers).K


def enumerate_good(tri: Triangulation, budget: int = DEFAULT_BUDGET) -> Iterator[EdgeLabeling]:
    """Yield every good labeling once, in the deterministic search order."""
    _require_valid(tri)
    yield from _Search(tri, budget).walk()


def sign_stats(tri: Triangulation, u: Mapping[Edge, int]) -> tuple[int, int]:
    """Numbers of triangles with determinant +1 and -1 under the stored orientation."""
    dets = _dets(tri, u)
    if not all(dets):
        raise LabelingError("sign statistics are only defined for good labelings")
    plus = sum(1 for d in dets if d > 0)
    return plus, len(dets) - plus


def tait_expand(tri: Triangulation, u: Mapping[Edge, int]) -> list[FaceColouring]:
    """The four face colourings of the dual polyhedron induced by a good labeling.

    Faces of the dual are the vertices of ``tri``.  The lexicographically
    first vertex takes each of W, R, G, B in turn; every other colour is that
    base colour plus the Klein-group sum of labels along any path to it.
    """
    if not is_good(tri, u):
        raise LabelingError("tait_expand needs a good labeling")
    root = tri.vertices[0]
    offset = {root: 0}
    queue = [root]
    while queue:
        x = queue.pop()
        for y in sorted(tri.neighbours[x]):
            val = offset[x] ^ u[edge_key(x, y)]
            if y not in offset:
                offset[y] = val
                queue.append(y)
            elif offset[y] != val:
                raise AssertionError(f"labeling does not integrate around edge {x}{y}")
    return [{v: COLOURS[base ^ off] for v, off in offset.items()} for base in range(4)]


def is_good_colouring(tri: Triangulation, colouring: Mapping[str, str]) -> bool:
    """Adjacent dual faces (adjacent vertices of ``tri``) carry distinct colours."""
    return all(colouring[x] != colouring[y] for x, y in tri.edges)


def format_labeling(u: Mapping[Edge, int]) -> str:
    return " ".join(f"{x}-{y}={u[(x, y)]}" for x, y in sorted(u))
