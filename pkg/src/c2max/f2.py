"""Exact linear algebra over GF(2) with rows packed into Python ints.

Bit ``j`` of a row is the entry in column ``j``.  Vectors are plain ints in
the same convention, so a vector of length ``n`` is any int below ``2**n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def low_bit(x: int) -> int:
    """Index of the lowest set bit of a nonzero int."""
    return (x & -x).bit_length() - 1


def bits(x: int) -> list[int]:
    out = []
    while x:
        b = x & -x
        out.append(b.bit_length() - 1)
        x ^= b
    return out


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class F2Matrix:
    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 0:
            raise ValueError("negative column count")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the column range")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def from_dense(cls, array) -> "F2Matrix":
        a = np.asarray(array, dtype=np.int64) % 2
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        nrows, ncols = a.shape
        rows = []
        for i in range(nrows):
            r = 0
            for j in np.flatnonzero(a[i]):
                r |= 1 << int(j)
            rows.append(r)
        return cls(tuple(rows), ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "F2Matrix":
        """Build from column vectors (bit ``i`` of ``columns[j]`` is entry (i, j))."""
        rows = [0] * nrows
        for j, c in enumerate(columns):
            for i in bits(c):
                rows[i] |= 1 << j
        return cls(tuple(rows), len(columns))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in bits(r):
                out[i, j] = 1
        return out

    def columns(self) -> list[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in bits(r):
                cols[j] |= 1 << i
        return cols

    def transpose(self) -> "F2Matrix":
        return F2Matrix(tuple(self.columns()), self.nrows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def apply(self, v: int) -> int:
        """Matrix-vector product ``M v``."""
        out = 0
        for i, r in enumerate(self.rows):
            if popcount(r & v) & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        rows = []
        for r in self.rows:
            acc = 0
            for k in bits(r):
                acc ^= other.rows[k]
            rows.append(acc)
        return F2Matrix(tuple(rows), other.ncols)

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return F2Matrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.ncols)

    def hstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        s = self.ncols
        return F2Matrix(tuple(a | (b << s) for a, b in zip(self.rows, other.rows)), s + other.ncols)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and all(r == 1 << i for i, r in enumerate(self.rows))

    def is_zero(self) -> bool:
        return not any(self.rows)


class Echelon:
    """Incrementally built echelon basis keyed by lowest set bit.

    Each stored row may carry an integer tag that is XORed alongside it, which
    is how coordinates relative to a chosen basis are recovered.
    """

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, x: int, tag: int = 0) -> tuple[int, int]:
        piv = self.pivots
        while x:
            p = low_bit(x)
            hit = piv.get(p)
            if hit is None:
                break
            x ^= hit[0]
            tag ^= hit[1]
        return x, tag

    def add(self, x: int, tag: int = 0) -> bool:
        """Insert ``x``; return False if it was already in the span."""
        x, tag = self.reduce(x, tag)
        if not x:
            return False
        self.pivots[low_bit(x)] = (x, tag)
        return True

    def contains(self, x: int) -> bool:
        return self.reduce(x)[0] == 0


def rank_of_vectors(vectors: Iterable[int]) -> int:
    ech = Echelon()
    r = 0
    for v in vectors:
        if ech.add(v):
            r += 1
    return r


def rref(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form.

    Pivot rule: scan columns left to right and take the topmost unused row
    with a one in that column.  Returns (nonzero rows of the RREF, pivot columns).
    """
    work = list(rows)
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(work):
            break
        mask = 1 << col
        hit = None
        for r in range(top, len(work)):
            if work[r] & mask:
                hit = r
                break
        if hit is None:
            continue
        work[top], work[hit] = work[hit], work[top]
        pr = work[top]
        for r in range(len(work)):
            if r != top and work[r] & mask:
                work[r] ^= pr
        pivots.append(col)
        top += 1
    return work[:top], pivots


def rank(m: F2Matrix) -> int:
    # the lowest-bit echelon is much cheaper than a full RREF on sparse input
    return rank_of_vectors(m.rows)


def kernel_basis(m: F2Matrix) -> list[int]:
    """Basis of ``{v : M v = 0}`` as ints over ``m.ncols`` bits."""
    red, pivots = rref(m.rows, m.ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        v = 1 << f
        for row, p in zip(red, pivots):
            if (row >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def kernel_of_columns(images: Sequence[int]) -> list[int]:
    """Kernel of the map sending basis vector ``j`` to ``images[j]``.

    Same subspace as :func:`kernel_basis` on the matrix with these columns,
    computed by column reduction, which stays sparse on coboundary matrices.
    """
    ech = Echelon()
    out = []
    for j, img in enumerate(images):
        x, combo = ech.reduce(img, 1 << j)
        if x:
            ech.pivots[low_bit(x)] = (x, combo)
        else:
            out.append(combo)
    return out


def solve_all(m: F2Matrix, b: F2Matrix) -> F2Matrix | None:
    """Return some ``X`` with ``M X = B``, or None if no solution exists."""
    if m.nrows != b.nrows:
        raise ValueError(f"row mismatch: M has {m.nrows} rows, B has {b.nrows}")
    n = m.ncols
    aug = m.hstack(b)
    red, pivots = rref(aug.rows, aug.ncols)
    if pivots and pivots[-1] >= n:
        return None
    x_rows = [0] * n
    for row, p in zip(red, pivots):
        x_rows[p] = row >> n
    return F2Matrix(tuple(x_rows), b.ncols)
