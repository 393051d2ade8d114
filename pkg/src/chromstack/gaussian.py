"""Exact Gaussian-integer scalars and sparse matrices between tensor powers of V.

Every matrix here is stored as a pair of integer CSR matrices (real part,
imaginary part).  Products, sums and Kronecker products of integer sparse
matrices are exact, so nothing in this module ever rounds.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Union

import numpy as np
import scipy.sparse as sps

__all__ = ["GaussInt", "Intertwiner", "i_power", "ONE", "I_UNIT", "ZERO", "log3"]

_DTYPE = np.int64


class GaussInt:
    """An element ``re + im*i`` of Z[i]."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussInt is immutable")

    @classmethod
    def coerce(cls, value: "Scalar") -> "GaussInt":
        if isinstance(value, GaussInt):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(int(value), 0)
        if isinstance(value, complex):
            if value.real != int(value.real) or value.imag != int(value.imag):
                raise ValueError(f"{value!r} is not a Gaussian integer")
            return cls(int(value.real), int(value.imag))
        raise TypeError(f"cannot interpret {type(value).__name__} as a Gaussian integer")

    def __add__(self, other):
        o = GaussInt.coerce(other)
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussInt.coerce(other)
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussInt.coerce(other) - self

    def __mul__(self, other):
        o = GaussInt.coerce(other)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not Gaussian integers in general")
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re or self.im)

    def __eq__(self, other):
        try:
            o = GaussInt.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(self.re, self.im)

    def __repr__(self):
        return f"GaussInt({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return {1: "i", -1: "-i"}.get(self.im, f"{self.im}i")
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        return f"{self.re}{sign}{'' if mag == 1 else mag}i"


Scalar = Union[GaussInt, int, complex]

ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I_UNIT = GaussInt(0, 1)
_I_POWERS = (ONE, I_UNIT, GaussInt(-1, 0), GaussInt(0, -1))


def i_power(k: int) -> GaussInt:
    """``i**k`` for any integer ``k``."""
    return _I_POWERS[k % 4]


def log3(n: int) -> int:
    """Exponent ``p`` with ``3**p == n``; raises if ``n`` is not a power of 3."""
    p = 0
    m = n
    while m > 1 and m % 3 == 0:
        m //= 3
        p += 1
    if m != 1:
        raise ValueError(f"{n} is not a power of 3")
    return p


def _csr(mat, shape) -> sps.csr_matrix:
    out = sps.csr_matrix(mat, shape=shape, dtype=_DTYPE)
    out.eliminate_zeros()
    out.sort_indices()
    return out


class Intertwiner:
    """Sparse Gaussian-integer matrix of shape ``3**target x 3**source``.

    Rows index basis tensors of ``V^target`` and columns basis tensors of
    ``V^source``; a basis tensor ``e_{a1} (x) ... (x) e_{al}`` (labels in
    {1,2,3}) sits at the base-3 position of ``(a1-1, ..., al-1)``, first
    factor most significant.  Any square 3-power matrix (e.g. a generator
    action) fits the same container; being an actual intertwiner is checked
    separately by :func:`chromstack.replab.equivariance_check`.
    """

    __slots__ = ("re", "im", "shape")

    def __init__(self, re, im=None, shape=None):
        shape = tuple(shape) if shape is not None else tuple(re.shape)
        self.shape = shape
        self.re = _csr(re, shape)
        self.im = _csr(im if im is not None else sps.csr_matrix(shape, dtype=_DTYPE), shape)

    # constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, target: int, source: int) -> "Intertwiner":
        shape = (3**target, 3**source)
        return cls(sps.csr_matrix(shape, dtype=_DTYPE), shape=shape)

    @classmethod
    def identity(cls, power: int) -> "Intertwiner":
        n = 3**power
        return cls(sps.identity(n, dtype=_DTYPE, format="csr"), shape=(n, n))

    @classmethod
    def from_triplets(cls, shape, triplets: Iterable[tuple[int, int, Scalar]]) -> "Intertwiner":
        rows, cols, res, ims = [], [], [], []
        for r, c, v in triplets:
            g = GaussInt.coerce(v)
            if g:
                rows.append(r)
                cols.append(c)
                res.append(g.re)
                ims.append(g.im)
        rows_a = np.asarray(rows, dtype=np.int64)
        cols_a = np.asarray(cols, dtype=np.int64)
        re = sps.coo_matrix((np.asarray(res, dtype=_DTYPE), (rows_a, cols_a)), shape=shape)
        im = sps.coo_matrix((np.asarray(ims, dtype=_DTYPE), (rows_a, cols_a)), shape=shape)
        return cls(re, im, shape)

    @classmethod
    def from_dense(cls, rows: Iterable[Iterable[Scalar]]) -> "Intertwiner":
        data = [[GaussInt.coerce(v) for v in row] for row in rows]
        shape = (len(data), len(data[0]) if data else 0)
        return cls.from_triplets(
            shape, ((r, c, v) for r, row in enumerate(data) for c, v in enumerate(row))
        )

    @classmethod
    def from_sympy(cls, mat) -> "Intertwiner":
        import sympy

        trip = []
        for r in range(mat.rows):
            for c in range(mat.cols):
                v = sympy.nsimplify(mat[r, c])
                if v == 0:
                    continue
                re, im = sympy.re(v), sympy.im(v)
                if not (re.is_integer and im.is_integer):
                    raise ValueError(f"entry ({r},{c}) = {v} is not a Gaussian integer")
                trip.append((r, c, GaussInt(int(re), int(im))))
        return cls.from_triplets((mat.rows, mat.cols), trip)

    # shape bookkeeping -----------------------------------------------
    @property
    def target_power(self) -> int:
        return log3(self.shape[0])

    @property
    def source_power(self) -> int:
        return log3(self.shape[1])

    @property
    def nnz(self) -> int:
        return len(set(self._support()))

    def _support(self) -> Iterator[tuple[int, int]]:
        for m in (self.re, self.im):
            coo = m.tocoo()
            yield from zip(coo.row.tolist(), coo.col.tolist())

    # algebra ---------------------------------------------------------
    def __matmul__(self, other: "Intertwiner") -> "Intertwiner":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        re = self.re @ other.re - self.im @ other.im
        im = self.re @ other.im + self.im @ other.re
        return Intertwiner(re, im, (self.shape[0], other.shape[1]))

    def __add__(self, other: "Intertwiner") -> "Intertwiner":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} + {other.shape}")
        return Intertwiner(self.re + other.re, self.im + other.im, self.shape)

    def __sub__(self, other: "Intertwiner") -> "Intertwiner":
        return self + (-other)

    def __neg__(self) -> "Intertwiner":
        return Intertwiner(-self.re, -self.im, self.shape)

    def scale(self, c: Scalar) -> "Intertwiner":
        g = GaussInt.coerce(c)
        return Intertwiner(
            self.re * g.re - self.im * g.im, self.re * g.im + self.im * g.re, self.shape
        )

    def __rmul__(self, c: Scalar) -> "Intertwiner":
        return self.scale(c)

    def kron(self, other: "Intertwiner") -> "Intertwiner":
        """Tensor product ``self (x) other`` (self acts on the leading factors)."""
        re = sps.kron(self.re, other.re) - sps.kron(self.im, other.im)
        im = sps.kron(self.re, other.im) + sps.kron(self.im, other.re)
        shape = (self.shape[0] * other.shape[0], self.shape[1] * other.shape[1])
        return Intertwiner(re, im, shape)

    def pad(self, left: int = 0, right: int = 0) -> "Intertwiner":
        """``I^left (x) self (x) I^right``."""
        out = self
        if left:
            out = Intertwiner.identity(left).kron(out)
        if right:
            out = out.kron(Intertwiner.identity(right))
        return out

    def transpose(self) -> "Intertwiner":
        return Intertwiner(self.re.T, self.im.T, (self.shape[1], self.shape[0]))

    # inspection ------------------------------------------------------
    def is_zero(self) -> bool:
        return self.re.nnz == 0 and self.im.nnz == 0

    def max_abs(self) -> int:
        """Largest ``max(|re|, |im|)`` over the entries."""
        best = 0
        for m in (self.re, self.im):
            if m.nnz:
                best = max(best, int(abs(m.data).max()))
        return best

    def entry(self, row: int, col: int) -> GaussInt:
        return GaussInt(int(self.re[row, col]), int(self.im[row, col]))

    def triplets(self) -> list[tuple[int, int, int, int]]:
        """Sorted ``(row, col, re, im)`` for every nonzero entry."""
        cells = sorted(set(self._support()))
        return [(r, c, int(self.re[r, c]), int(self.im[r, c])) for r, c in cells]

    def to_sympy(self):
        import sympy

        out = sympy.zeros(*self.shape)
        for r, c, re, im in self.triplets():
            out[r, c] = re + im * sympy.I
        return out

    def to_complex_array(self) -> np.ndarray:
        """Dense complex copy, for display only (exact while entries stay below 2**53)."""
        return self.re.toarray() + 1j * self.im.toarray()

    def scalar_multiple_of(self, other: "Intertwiner") -> GaussInt | None:
        """Return ``c`` with ``self == c * other``, or None when no such Gaussian integer exists."""
        if self.shape != other.shape:
            return None
        if other.is_zero():
            return ZERO if self.is_zero() else None
        r, c, re, im = other.triplets()[0]
        num = self.entry(r, c) * GaussInt(re, -im)
        den = re * re + im * im
        if num.re % den or num.im % den:
            return None
        cand = GaussInt(num.re // den, num.im // den)
        return cand if self == other.scale(cand) else None

    def __eq__(self, other):
        if not isinstance(other, Intertwiner):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (self.re != other.re).nnz == 0 and (self.im != other.im).nnz == 0

    __hash__ = None

    def __repr__(self):
        return f"Intertwiner(V^{self.source_power} -> V^{self.target_power}, nnz={self.nnz})"
