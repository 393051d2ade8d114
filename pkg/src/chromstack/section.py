"""Global sections built by integrating a sweep.

Along a path (x_0, ..., x_l) every vertex x carries a tensor power V^{n_x}
and every edge (x, y), x left of y, carries two intertwiners:

    forward   zeta_yx : V^{n_x}     -> V^{1+n_y}
    backward  zeta_xy : V^{1+n_y}   -> V^{n_x}

Starting from the base edge (a, b) with n_a = n_b = 1, forward arrow F and
backward arrow Ft, the plan is replayed move by move.  An insertion of y
between x and z is :func:`phi_sigma_bar`, a deletion is :func:`phi_sigma`.
The two copies of the base edge on the cut disk are kept apart: copy 0 is
the starting arrow pair, copy 1 the pair produced by the last deletion, which
equals K times the starting pair.

Every arrow keeps a symbolic word alongside its matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .gaussian import GaussInt, Intertwiner
from .replab import F_matrix, Ft_matrix, equivariance_check
from .surface import Edge, Triangulation, edge_key
from .sweep import SweepPlan, move_orientation, verify_plan

__all__ = [
    "Factor",
    "Word",
    "Arrow",
    "PathSection",
    "GlobalSection",
    "SectionError",
    "base_section",
    "phi_sigma",
    "phi_sigma_bar",
    "build_section",
    "transport",
    "EdgeCertificate",
    "Certificate",
    "nonvanishing_certificate",
    "audit_listing",
    "boundary_scalar",
]


class SectionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# symbolic words


@dataclass(frozen=True)
class Factor:
    """``I^left (x) op (x) I^right`` with op one of F, Ft."""

    left: int
    op: str
    right: int

    def shifted(self, k: int) -> "Factor":
        return Factor(self.left + k, self.op, self.right)

    def render(self) -> str:
        parts = []
        if self.left:
            parts.append("I" if self.left == 1 else f"I^{self.left}")
        parts.append(self.op)
        if self.right:
            parts.append("I" if self.right == 1 else f"I^{self.right}")
        return " x ".join(parts)


@dataclass(frozen=True)
class Word:
    """A composite ``f_1 o f_2 o ... o f_k`` acting on V^source (f_k applied first).

    ``zero`` marks an arrow forced to vanish; ``scale`` a Gaussian prefactor.
    """

    source: int
    factors: tuple[Factor, ...] = ()
    scale: GaussInt = GaussInt(1)
    zero: bool = False

    def then(self, other: "Word") -> "Word":
        """``other o self``."""
        return Word(self.source, other.factors + self.factors, self.scale * other.scale, self.zero or other.zero)

    def tensor_left(self, k: int = 1) -> "Word":
        """``I^k (x) self``."""
        return Word(self.source + k, tuple(f.shifted(k) for f in self.factors), self.scale, self.zero)

    def times(self, c) -> "Word":
        return Word(self.source, self.factors, self.scale * GaussInt.coerce(c), self.zero)

    def render(self) -> str:
        if self.zero:
            return "0"
        if not self.factors:
            body = "I" if self.source == 1 else f"I^{self.source}"
        elif len(self.factors) == 1:
            body = self.factors[0].render()
        else:
            body = " o ".join(f"({f.render()})" if (f.left or f.right) else f.render() for f in self.factors)
        return body if self.scale == 1 else f"({self.scale}) * {body}"


def _op_word(op: str, right: int) -> Word:
    source = (1 if op == "F" else 2) + right
    return Word(source, (Factor(0, op, right),))


def _op_matrix(op: str, right: int) -> Intertwiner:
    base = F_matrix() if op == "F" else Ft_matrix()
    return base.pad(0, right)


@dataclass(frozen=True)
class Arrow:
    matrix: Intertwiner
    word: Word

    @property
    def source_power(self) -> int:
        return self.matrix.source_power

    @property
    def target_power(self) -> int:
        return self.matrix.target_power

    def then(self, other: "Arrow") -> "Arrow":
        return Arrow(other.matrix @ self.matrix, self.word.then(other.word))

    def tensor_left(self, k: int = 1) -> "Arrow":
        return Arrow(self.matrix.pad(k, 0), self.word.tensor_left(k))

    def times(self, c) -> "Arrow":
        return Arrow(self.matrix.scale(c), self.word.times(c))

    def zeroed(self) -> "Arrow":
        return Arrow(Intertwiner.zeros(self.target_power, self.source_power), Word(self.word.source, zero=True))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


def _identity(power: int) -> Arrow:
    return Arrow(Intertwiner.identity(power), Word(power))


def _op(op: str, right: int) -> Arrow:
    return Arrow(_op_matrix(op, right), _op_word(op, right))


# ---------------------------------------------------------------------------
# sections over a path


@dataclass
class PathSection:
    """Powers and arrows along one edge-path."""

    path: tuple[str, ...]
    powers: dict[str, int]
    forward: dict[Edge, Arrow]  # (x, y) with x left of y  ->  zeta_yx
    backward: dict[Edge, Arrow]  # (x, y) with x left of y  ->  zeta_xy

    def pairs(self) -> list[tuple[str, str]]:
        return list(zip(self.path, self.path[1:]))

    def check_shapes(self) -> None:
        for x, y in self.pairs():
            f, b = self.forward[(x, y)], self.backward[(x, y)]
            nx, ny = self.powers[x], self.powers[y]
            if (f.source_power, f.target_power) != (nx, 1 + ny):
                raise SectionError(f"forward arrow on {x}{y} is V^{f.source_power} -> V^{f.target_power}, expected V^{nx} -> V^{1 + ny}")
            if (b.source_power, b.target_power) != (1 + ny, nx):
                raise SectionError(f"backward arrow on {x}{y} is V^{b.source_power} -> V^{b.target_power}, expected V^{1 + ny} -> V^{nx}")


def base_section(a: str = "a", b: str = "b") -> PathSection:
    """zeta_a = zeta_b = V, forward F, backward Ft."""
    return PathSection((a, b), {a: 1, b: 1}, {(a, b): _op("F", 0)}, {(a, b): _op("Ft", 0)})


def phi_sigma_bar(sec: PathSection, j: int, y: str) -> PathSection:
    """Insert ``y`` between ``x = path[j]`` and ``z = path[j+1]``.

    zeta_y = V zeta_z, zeta_yx = (F x I) o xi_zx, zeta_xy = xi_xz o (Ft x I),
    zeta_zy = zeta_yz = identity.
    """
    path = sec.path
    if not 0 <= j < len(path) - 1:
        raise SectionError(f"insertion slot {j} outside the path {path}")
    x, z = path[j], path[j + 1]
    nz = sec.powers[z]
    fwd, bwd = sec.forward[(x, z)], sec.backward[(x, z)]
    if (fwd.target_power, bwd.source_power) != (1 + nz, 1 + nz):
        raise SectionError(f"arrows on {x}{z} do not match power {nz} of {z}")
    powers = dict(sec.powers)
    powers[y] = 1 + nz
    forward = {k: v for k, v in sec.forward.items() if k != (x, z)}
    backward = {k: v for k, v in sec.backward.items() if k != (x, z)}
    forward[(x, y)] = fwd.then(_op("F", nz))
    backward[(x, y)] = _op("Ft", nz).then(bwd)
    forward[(y, z)] = _identity(1 + nz)
    backward[(y, z)] = _identity(1 + nz)
    return PathSection(path[: j + 1] + (y,) + path[j + 1 :], powers, forward, backward)


def phi_sigma(sec: PathSection, k: int) -> PathSection:
    """Delete ``y = path[k]`` from ``(x, y, z)``.

    xi_zx = (Ft x I) o (I x zeta_zy) o zeta_yx,
    xi_xz = zeta_xy o (I x zeta_yz) o (F x I).
    """
    path = sec.path
    if not 1 <= k < len(path) - 1:
        raise SectionError(f"deletion position {k} outside the interior of {path}")
    x, y, z = path[k - 1], path[k], path[k + 1]
    nz = sec.powers[z]
    f_xy, b_xy = sec.forward[(x, y)], sec.backward[(x, y)]
    f_yz, b_yz = sec.forward[(y, z)], sec.backward[(y, z)]
    if f_yz.target_power != 1 + nz or b_yz.source_power != 1 + nz:
        raise SectionError(f"arrows on {y}{z} do not match power {nz} of {z}")
    forward = {key: v for key, v in sec.forward.items() if key not in ((x, y), (y, z))}
    backward = {key: v for key, v in sec.backward.items() if key not in ((x, y), (y, z))}
    forward[(x, z)] = f_xy.then(f_yz.tensor_left()).then(_op("Ft", nz))
    backward[(x, z)] = _op("F", nz).then(b_yz.tensor_left()).then(b_xy)
    powers = {v: p for v, p in sec.powers.items() if v != y}
    return PathSection(path[:k] + path[k + 1 :], powers, forward, backward)


# ---------------------------------------------------------------------------
# the global section on the cut disk


@dataclass
class GlobalSection:
    base: tuple[str, str]
    powers: dict[str, int]
    forward: dict[Edge, Arrow]  # interior edges, keyed (left, right)
    backward: dict[Edge, Arrow]
    boundary: dict[int, tuple[Arrow, Arrow]]  # copy -> (forward zeta_ba, backward zeta_ab)
    first_visit: dict[str, int] = field(default_factory=dict)  # vertex -> step
    edge_step: dict[Edge, int] = field(default_factory=dict)  # (left, right) -> step

    def arrows(self) -> Iterable[tuple[str, Arrow]]:
        """Every arrow with a label, boundary copies first, then edges in sorted order."""
        a, b = self.base
        for copy in sorted(self.boundary):
            f, bk = self.boundary[copy]
            yield f"{b}{a}[{copy}]", f
            yield f"{a}{b}[{copy}]", bk
        for x, y in sorted(self.forward):
            yield f"{y}{x}", self.forward[(x, y)]
            yield f"{x}{y}", self.backward[(x, y)]

    def arrow(self, p: str, q: str, copy: int | None = None) -> Arrow:
        """zeta_pq, first index the target vertex (boundary pairs need ``copy``)."""
        a, b = self.base
        if {p, q} == {a, b}:
            if copy is None:
                raise SectionError("the base edge has two copies; pass copy=0 or copy=1")
            f, bk = self.boundary[copy]
            return bk if (p, q) == (a, b) else f
        if (q, p) in self.forward:
            return self.forward[(q, p)]
        if (p, q) in self.backward:
            return self.backward[(p, q)]
        raise SectionError(f"no arrow zeta_{p}{q}")

    def to_dict(self, include_matrices: bool = True) -> dict:
        out = {"base": list(self.base), "powers": dict(sorted(self.powers.items())), "arrows": []}
        for name, arr in self.arrows():
            item = {
                "name": name,
                "source_power": arr.source_power,
                "target_power": arr.target_power,
                "word": arr.word.render(),
            }
            if include_matrices:
                item["triplets"] = [list(t) for t in arr.matrix.triplets()]
            out["arrows"].append(item)
        return out

    def to_json(self, include_matrices: bool = True) -> str:
        return json.dumps(self.to_dict(include_matrices), sort_keys=True) + "\n"


def _check_consistent(tri: Triangulation, plan: SweepPlan) -> None:
    signs = [(m.kind, move_orientation(tri, m)) for m in plan.moves]
    ins = {s for k, s in signs if k == "I"}
    dels = {s for k, s in signs if k == "D"}
    if len(ins) > 1 or len(dels) > 1 or ins & dels:
        raise SectionError("the sweep does not keep the swept region on one side (mixed move orientations)")


def build_section(
    tri: Triangulation,
    plan: SweepPlan,
    zero_edges: Iterable[Sequence[str]] = (),
    check: bool = True,
) -> GlobalSection:
    """Replay ``plan`` from the base section and collect every arrow.

    Edges listed in ``zero_edges`` have both arrows replaced by zero the
    moment they are created (a synthetic fault for testing the certificate).
    """
    if check:
        rep = verify_plan(tri, plan)
        if not rep.ok:
            raise SectionError("invalid sweep plan: " + "; ".join(rep.problems))
        _check_consistent(tri, plan)
    zeros = {edge_key(*e) for e in zero_edges}
    a, b = plan.base
    sec = base_section(a, b)
    if edge_key(a, b) in zeros:
        sec.forward[(a, b)] = sec.forward[(a, b)].zeroed()
        sec.backward[(a, b)] = sec.backward[(a, b)].zeroed()
    powers = dict(sec.powers)
    first_visit = {a: 0, b: 0}
    forward: dict[Edge, Arrow] = {}
    backward: dict[Edge, Arrow] = {}
    edge_step: dict[Edge, int] = {}
    boundary = {0: (sec.forward[(a, b)], sec.backward[(a, b)])}
    for step, m in enumerate(plan.moves, 1):
        if m.kind == "I":
            sec = phi_sigma_bar(sec, m.pos, m.vertex)
            x, z = sec.path[m.pos], sec.path[m.pos + 2]
            new = [(x, m.vertex), (m.vertex, z)]
            y = m.vertex
            if y in powers and powers[y] != sec.powers[y]:
                raise SectionError(f"vertex {y} revisited with power {sec.powers[y]} after {powers[y]}")
            powers.setdefault(y, sec.powers[y])
            first_visit.setdefault(y, step)
        else:
            sec = phi_sigma(sec, m.pos)
            new = [(sec.path[m.pos - 1], sec.path[m.pos])]
        for pair in new:
            if edge_key(*pair) in zeros:
                sec.forward[pair] = sec.forward[pair].zeroed()
                sec.backward[pair] = sec.backward[pair].zeroed()
            if edge_key(*pair) == edge_key(a, b):
                if step != len(plan.moves):
                    raise SectionError("the base edge reappears before the end of the sweep")
                boundary[1] = (sec.forward[pair], sec.backward[pair])
                continue
            if pair in forward or pair[::-1] in forward:
                raise SectionError(f"edge {pair[0]}{pair[1]} reached twice")
            forward[pair] = sec.forward[pair]
            backward[pair] = sec.backward[pair]
            edge_step[pair] = step
    if 1 not in boundary:
        raise SectionError("the sweep did not return to the base edge")
    return GlobalSection((a, b), powers, forward, backward, boundary, first_visit, edge_step)


def transport(section: GlobalSection, path: Sequence[str], direction: str = "direct", copy: int = 1) -> Intertwiner:
    """Transport operator along ``path`` (vertices of the section).

    ``direct``:  (I^{l-1} x zeta_{a_l a_{l-1}}) o ... o zeta_{a_1 a_0}, from V^{n_{a_0}} to V^{l+n_{a_l}};
    ``inverse``: zeta_{a_0 a_1} o (I x zeta_{a_1 a_2}) o ... o (I^{l-1} x zeta_{a_{l-1} a_l}), the other way.
    ``copy`` selects which copy of the base edge a step along it uses.
    """
    path = tuple(path)
    if direction not in ("direct", "inverse"):
        raise ValueError("direction must be 'direct' or 'inverse'")
    missing = [v for v in path if v not in section.powers]
    if missing:
        raise SectionError(f"vertex {missing[0]} not in the section")
    n0 = section.powers[path[0]]
    if len(path) == 1:
        return Intertwiner.identity(n0)
    if direction == "direct":
        out = Intertwiner.identity(n0)
        for k, (p, q) in enumerate(zip(path, path[1:])):
            arr = section.arrow(q, p, copy if {p, q} == set(section.base) else None)
            out = _chain(arr.matrix.pad(k, 0), out, f"zeta_{q}{p}")
        return out
    nl = section.powers[path[-1]]
    out = Intertwiner.identity(len(path) - 1 + nl)
    for k in range(len(path) - 2, -1, -1):
        p, q = path[k], path[k + 1]
        arr = section.arrow(p, q, copy if {p, q} == set(section.base) else None)
        out = _chain(arr.matrix.pad(k, 0), out, f"zeta_{p}{q}")
    return out


def _chain(step: Intertwiner, acc: Intertwiner, name: str) -> Intertwiner:
    if step.source_power != acc.target_power:
        raise SectionError(
            f"{name} (padded) starts at V^{step.source_power} but the transport so far ends at "
            f"V^{acc.target_power}; the path runs against the sweep direction"
        )
    return step @ acc


# ---------------------------------------------------------------------------
# certificates


@dataclass
class EdgeCertificate:
    name: str
    nonzero: bool
    max_abs: int
    equivariant: bool | None = None


@dataclass
class Certificate:
    edges: list[EdgeCertificate]
    boundary_scalar: GaussInt | None  # copy 1 backward arrow divided by Ft
    all_nonvanishing: bool
    consistent: bool  # a vanishing arrow forces a vanishing boundary scalar

    def to_dict(self) -> dict:
        return {
            "all_nonvanishing": self.all_nonvanishing,
            "boundary_scalar": None if self.boundary_scalar is None else str(self.boundary_scalar),
            "consistent": self.consistent,
            "edges": [
                {"name": e.name, "nonzero": e.nonzero, "max_abs": e.max_abs, "equivariant": e.equivariant}
                for e in self.edges
            ],
        }


def boundary_scalar(section: GlobalSection) -> GaussInt | None:
    """``c`` with final backward arrow = c * Ft and final forward arrow = c * F, else None."""
    f, b = section.boundary[1]
    cb = b.matrix.scalar_multiple_of(Ft_matrix())
    cf = f.matrix.scalar_multiple_of(F_matrix())
    return cb if cb is not None and cb == cf else None


def nonvanishing_certificate(section: GlobalSection, equivariance: bool = False) -> Certificate:
    edges = []
    for name, arr in section.arrows():
        eq = equivariance_check(arr.matrix) if equivariance else None
        edges.append(EdgeCertificate(name, not arr.is_zero(), arr.matrix.max_abs(), eq))
    scalar = boundary_scalar(section)
    all_nz = all(e.nonzero for e in edges)
    consistent = all_nz or scalar == 0
    return Certificate(edges, scalar, all_nz, consistent)


def audit_listing(section: GlobalSection) -> list[str]:
    """Lines ``zeta_x = V^n`` per vertex (in order of first visit) and ``zeta_pq = word`` per arrow."""
    lines = []

    def power(n: int) -> str:
        return "V" if n == 1 else f"V^{n}"

    a, b = section.base
    lines.append(f"zeta_{a} = zeta_{b} = V")
    events: list[tuple[int, int, str]] = []
    for v, step in section.first_visit.items():
        if step:
            events.append((step, 0, f"zeta_{v} = {power(section.powers[v])}"))
    for (x, y), step in section.edge_step.items():
        events.append((step, 1, f"zeta_{x}{y} = {section.backward[(x, y)].word.render()}"))
        events.append((step, 2, f"zeta_{y}{x} = {section.forward[(x, y)].word.render()}"))
    lines += [t for _, _, t in sorted(events, key=lambda e: (e[0], e[1]))]
    f, bk = section.boundary[1]
    c = boundary_scalar(section)
    lines.append(f"zeta0_{a}{b} = " + (f"{c} Ft" if c is not None else bk.word.render()))
    lines.append(f"zeta0_{b}{a} = " + (f"{c} F" if c is not None else f.word.render()))
    return lines
