"""Transfer-matrix evaluation of the chromatic index along a sweeping loop.

A state on a path of length l is a sparse vector of V^l: a mapping from label
tuples (a_1, ..., a_l), a_i in {1, 2, 3}, to Gaussian integers.  Each move of
a sweep multiplies the state by one transfer matrix:

* inserting an apex splits slot j:  old label o  ->  pairs (x, y)
  with weight  s * i * eps(o, x, y);
* deleting an apex merges slots k-1 and k:  labels (p, q)  ->  n
  with weight  s * i * eps(p, q, n);

where ``s`` is +1 or -1.  Under the ``"coherent"`` convention ``s`` is the
agreement between the move's (left, apex, right) order and the stored
orientation of the swept triangle, so every triangle contributes exactly
``i * det`` in its coherent orientation and the loop trace is the chromatic
index for any valid sweep.  Under ``"unsigned"`` every ``s`` is +1, which
reproduces the published worked example state by state.

The inner loops work on integer dictionaries: a Gaussian state is split
into its real and imaginary parts, each evolved separately.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .gaussian import GaussInt, Intertwiner, i_power
from .surface import Triangulation
from .sweep import SweepPlan, move_orientation, verify_plan

__all__ = [
    "TensorState",
    "HolonomyReport",
    "PlanInvalid",
    "apply_insertion",
    "apply_deletion",
    "run_sweep",
    "loop_matrix_is_scalar",
    "format_state",
    "parse_state",
    "CONVENTIONS",
]

CONVENTIONS = ("coherent", "unsigned")

Key = tuple[int, ...]

# eps(o, x, y) = +1 for the cyclic successors of o, -1 for the swapped pair
_SPLIT = {o: ((o % 3 + 1, (o + 1) % 3 + 1, 1), ((o + 1) % 3 + 1, o % 3 + 1, -1)) for o in (1, 2, 3)}
_MERGE = {}
for _p in (1, 2, 3):
    for _q in (1, 2, 3):
        if _p != _q:
            _n = 6 - _p - _q
            _MERGE[(_p, _q)] = (_n, 1 if _q == _p % 3 + 1 else -1)


class PlanInvalid(ValueError):
    pass


@dataclass(frozen=True)
class TensorState:
    """Sparse vector of V^length with Gaussian-integer coefficients (no stored zeros)."""

    length: int
    terms: Mapping[Key, GaussInt] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, v in self.terms.items():
            k = tuple(int(a) for a in k)
            if len(k) != self.length:
                raise ValueError(f"term {k} does not have length {self.length}")
            if any(a not in (1, 2, 3) for a in k):
                raise ValueError(f"term {k} has labels outside 1..3")
            g = GaussInt.coerce(v)
            if g:
                clean[k] = g
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(clean.items()))))

    @classmethod
    def unit(cls, *labels: int) -> "TensorState":
        return cls(len(labels), {tuple(labels): GaussInt(1)})

    @classmethod
    def zero(cls, length: int) -> "TensorState":
        return cls(length, {})

    @classmethod
    def _from_parts(cls, length: int, re: Mapping[Key, int], im: Mapping[Key, int]) -> "TensorState":
        keys = set(re) | set(im)
        return cls(length, {k: GaussInt(re.get(k, 0), im.get(k, 0)) for k in keys})

    def _parts(self) -> tuple[dict[Key, int], dict[Key, int]]:
        re = {k: v.re for k, v in self.terms.items() if v.re}
        im = {k: v.im for k, v in self.terms.items() if v.im}
        return re, im

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "TensorState") -> "TensorState":
        if self.length != other.length:
            raise ValueError("cannot add states of different lengths")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, GaussInt(0)) + v
        return TensorState(self.length, out)

    def scale(self, c) -> "TensorState":
        g = GaussInt.coerce(c)
        return TensorState(self.length, {k: v * g for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TensorState):
            return NotImplemented
        return self.length == other.length and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.length, tuple(self.terms.items())))

    def __repr__(self):
        return f"TensorState({self.length}, {format_state(self)})"


# ---------------------------------------------------------------------------
# integer kernels


def _split(vec: Mapping[Key, int], j: int, counter: list[int]) -> dict[Key, int]:
    out: dict[Key, int] = {}
    get = out.get
    ops = 0
    for t, c in vec.items():
        head, tail = t[:j], t[j + 1 :]
        for x, y, e in _SPLIT[t[j]]:
            k = head + (x, y) + tail
            out[k] = get(k, 0) + e * c
            ops += 1
    counter[0] += ops
    return {k: v for k, v in out.items() if v}


def _merge(vec: Mapping[Key, int], k: int, counter: list[int]) -> dict[Key, int]:
    out: dict[Key, int] = {}
    get = out.get
    ops = 0
    for t, c in vec.items():
        hit = _MERGE.get((t[k - 1], t[k]))
        if hit is None:
            continue
        n, e = hit
        key = t[: k - 1] + (n,) + t[k + 1 :]
        out[key] = get(key, 0) + e * c
        ops += 1
    counter[0] += ops
    return {key: v for key, v in out.items() if v}


def _times_si(re: dict, im: dict, s: int) -> tuple[dict, dict]:
    """Multiply (re + i*im) by s*i."""
    return {k: -s * v for k, v in im.items()}, {k: s * v for k, v in re.items()}


def apply_insertion(state: TensorState, pos: int, sign: int = 1, *, _ops: list[int] | None = None) -> TensorState:
    """Split slot ``pos`` with weight ``sign * i * eps(old, new_left, new_right)``."""
    if not 0 <= pos < state.length:
        raise IndexError(f"insertion slot {pos} outside 0..{state.length - 1}")
    counter = _ops if _ops is not None else [0]
    re, im = state._parts()
    re, im = _times_si(_split(re, pos, counter), _split(im, pos, counter), sign)
    return TensorState._from_parts(state.length + 1, re, im)


def apply_deletion(state: TensorState, pos: int, sign: int = 1, *, _ops: list[int] | None = None) -> TensorState:
    """Merge slots ``pos-1`` and ``pos`` with weight ``sign * i * eps(left, right, new)``."""
    if not 1 <= pos < state.length:
        raise IndexError(f"deletion position {pos} outside 1..{state.length - 1}")
    counter = _ops if _ops is not None else [0]
    re, im = state._parts()
    re, im = _times_si(_merge(re, pos, counter), _merge(im, pos, counter), sign)
    return TensorState._from_parts(state.length - 1, re, im)


# ---------------------------------------------------------------------------
# sweeping


@dataclass
class HolonomyReport:
    K: int
    trace: GaussInt
    matrix: Intertwiner  # column c is the image of e_c under the loop map
    ops_count: int
    peak_support: int
    convention: str
    signs: list[int]
    states: list[TensorState] = field(default_factory=list)
    naive_products: int = 0

    @property
    def reduction(self) -> float:
        return self.naive_products / self.ops_count if self.ops_count else float("inf")

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "convention": self.convention,
            "ops_count": self.ops_count,
            "peak_support": self.peak_support,
            "naive_products": self.naive_products,
            "matrix": [[str(self.matrix.entry(r, c)) for c in range(3)] for r in range(3)],
        }


def _move_signs(tri: Triangulation, plan: SweepPlan, convention: str) -> list[int]:
    if convention == "coherent":
        return [move_orientation(tri, m) for m in plan.moves]
    if convention == "unsigned":
        return [1] * len(plan.moves)
    raise ValueError(f"convention must be one of {CONVENTIONS}")


def run_sweep(
    tri: Triangulation,
    plan: SweepPlan,
    convention: str = "coherent",
    trace_states: bool = False,
    check: bool = True,
) -> HolonomyReport:
    """Evolve each basis vector around the loop and return the trace.

    The three starts are independent; the loop matrix is assembled from the
    three final length-1 states.  With ``trace_states`` the intermediate
    states of the start ``e_1`` are kept.
    """
    if check:
        rep = verify_plan(tri, plan)
        if not rep.ok:
            raise PlanInvalid("invalid sweep plan: " + "; ".join(rep.problems))
    signs = _move_signs(tri, plan, convention)
    counter = [0]
    peak = 1
    cols: list[dict[Key, tuple[int, int]]] = []
    recorded: list[TensorState] = []
    for start in (1, 2, 3):
        # state = i**phase * vec, vec with integer coefficients
        vec: dict[Key, int] = {(start,): 1}
        phase = 0
        for m, s in zip(plan.moves, signs):
            if m.kind == "I":
                vec = _split(vec, m.pos, counter)
            else:
                vec = _merge(vec, m.pos, counter)
            if s < 0:
                vec = {k: -v for k, v in vec.items()}
            phase += 1
            peak = max(peak, len(vec))
            if trace_states and start == 1:
                unit = i_power(phase)
                recorded.append(TensorState(len(next(iter(vec))) if vec else 0, {k: unit * v for k, v in vec.items()}))
        unit = i_power(phase)
        cols.append({k: ((unit * v).re, (unit * v).im) for k, v in vec.items()})
    trip = []
    for c, col in enumerate(cols):
        for (r,), (re_, im_) in col.items():
            trip.append((r - 1, c, GaussInt(re_, im_)))
    matrix = Intertwiner.from_triplets((3, 3), trip)
    trace = sum((matrix.entry(a, a) for a in range(3)), GaussInt(0))
    if trace.im:
        raise ArithmeticError(f"loop trace {trace} is not real")
    return HolonomyReport(
        K=trace.re,
        trace=trace,
        matrix=matrix,
        ops_count=counter[0],
        peak_support=peak,
        convention=convention,
        signs=signs,
        states=recorded,
        naive_products=3**tri.t1,
    )


def loop_matrix_is_scalar(report: HolonomyReport) -> tuple[bool, GaussInt | None]:
    lam = report.matrix.scalar_multiple_of(Intertwiner.identity(1))
    return (lam is not None), lam


# ---------------------------------------------------------------------------
# compact notation, e.g. "i^2(313 - 133 - 122 + 212)"

_STATE_RE = re.compile(r"^\s*(?:i(?:\^(\d+))?\s*)?\((.*)\)\s*$")
_TERM_RE = re.compile(r"([+-]?)\s*([123]+)")


def format_state(state: TensorState, exponent: int | None = None) -> str:
    """Render with one unit term per multiplicity, factoring out ``i**exponent``.

    With ``exponent=None`` the smallest exponent in 0..3 that leaves integer
    coefficients is used.
    """
    if not state.terms:
        return "0"
    candidates = [exponent] if exponent is not None else range(4)
    for p in candidates:
        inv = i_power(-p)
        scaled = {k: v * inv for k, v in state.terms.items()}
        if all(v.is_real() for v in scaled.values()):
            break
    else:
        raise ValueError(f"state is not i^{exponent} times an integer vector")
    parts = []
    for k, v in scaled.items():
        digits = "".join(map(str, k))
        sign = "-" if v.re < 0 else "+"
        parts.extend([(sign, digits)] * abs(v.re))
    body = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    body += "".join(f" {s} {d}" for s, d in parts[1:])
    if p == 0:
        return f"({body})"
    prefix = "i" if p == 1 else f"i^{p}"
    return f"{prefix}({body})"


def parse_state(text: str) -> TensorState:
    """Inverse of :func:`format_state`; repeated terms add up."""
    m = _STATE_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse state {text!r}")
    p = 1 if m.group(1) is None and text.strip().startswith("i") else int(m.group(1) or 0)
    unit = i_power(p)
    body = m.group(2)
    acc: dict[Key, int] = {}
    length = None
    consumed = 0
    for tm in _TERM_RE.finditer(body):
        if body[consumed : tm.start()].strip():
            raise ValueError(f"unexpected text {body[consumed:tm.start()]!r} in {text!r}")
        consumed = tm.end()
        key = tuple(int(c) for c in tm.group(2))
        if length is None:
            length = len(key)
        elif len(key) != length:
            raise ValueError(f"mixed term lengths in {text!r}")
        acc[key] = acc.get(key, 0) + (-1 if tm.group(1) == "-" else 1)
    if body[consumed:].strip():
        raise ValueError(f"trailing text {body[consumed:]!r} in {text!r}")
    return TensorState(length or 0, {k: unit * v for k, v in acc.items()})
