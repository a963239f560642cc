"""Borel cohomology through the truncated double complex, barcodes and spectral pages.

Column ``p`` of the double complex is a copy of the cochains; the horizontal
differential is ``1 + σ*`` and the vertical one is the coboundary.  Shifting a
cochain one column to the right is multiplication by ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cohomology import (CochainComplex, Cohomology, cochains, cohomology_with_action, group_cohomology_dim,
                         space_cohomology)
from .complexes import ContractError
from .f2 import F2Matrix, bits, kernel_of_columns, rank, rank_of_vectors
from .simplicial import C2SimplicialSet

INF = math.inf


class StabilizationFailure(RuntimeError):
    def __init__(self, degree: int):
        super().__init__(f"multiplication by z is not an isomorphism in degree {degree}; truncation too small")
        self.degree = degree


class BorelComplex:
    """Total complex of the double complex with columns ``0..columns``."""

    def __init__(self, c: CochainComplex, columns: int):
        self.base = c
        self.columns = columns
        self.top = columns + c.top
        # cell (p, q, j) lives in total degree p + q
        self.cells: list[list[tuple[int, int, int]]] = []
        self.offset: list[dict[tuple[int, int], int]] = []
        for n in range(self.top + 1):
            cells, off = [], {}
            for p in range(min(n, columns) + 1):
                q = n - p
                if q > c.top:
                    continue
                off[(p, q)] = len(cells)
                cells.extend((p, q, j) for j in range(c.dims[q]))
            self.cells.append(cells)
            self.offset.append(off)
        self.d: list[list[int]] = []
        for n in range(self.top + 1):
            row = []
            for p, q, j in self.cells[n]:
                v = 0
                if n < self.top:
                    off = self.offset[n + 1]
                    if q < c.top:
                        v |= c.cob[q][j] << off[(p, q + 1)]
                    if p < columns:
                        sj = c.perm[q][j]
                        if sj != j:
                            base = off[(p + 1, q)]
                            v |= (1 << (base + j)) | (1 << (base + sj))
                row.append(v)
            self.d.append(row)

    def dims(self) -> list[int]:
        return [len(c) for c in self.cells]

    def shift(self, n: int, v: int) -> int:
        """Multiplication by z on a degree ``n`` cochain (columns past the end are dropped)."""
        out = 0
        off_to = self.offset[n + 1]
        for i in bits(v):
            p, q, j = self.cells[n][i]
            if p < self.columns:
                out |= 1 << (off_to[(p + 1, q)] + j)
        return out

    def column_mask(self, n: int, lo: int, hi: int | None = None) -> int:
        """Bitset of degree ``n`` cells in columns ``lo <= p < hi``."""
        m = 0
        for (p, q), start in self.offset[n].items():
            if p >= lo and (hi is None or p < hi):
                m |= ((1 << self.base.dims[q]) - 1) << start
        return m

    def as_cochain_complex(self) -> CochainComplex:
        dims = self.dims()
        return CochainComplex(dims, self.d, [list(range(d)) for d in dims])


@dataclass(frozen=True)
class GradedF2zModule:
    """Borel cohomology through degree ``N`` with the z-maps between consecutive degrees."""

    dims: tuple[int, ...]
    z: tuple[F2Matrix, ...]
    stab_degree: int

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def z_power_rank(self, start: int, stop: int) -> int:
        """Rank of z^(stop-start) from degree ``start`` to degree ``stop``."""
        m = F2Matrix.identity(self.dims[start])
        for n in range(start, stop):
            m = self.z[n] @ m
        return rank(m)


@dataclass(frozen=True)
class Bar:
    birth: int
    length: float  # math.inf for free summands

    @property
    def infinite(self) -> bool:
        return self.length == INF

    def to_dict(self) -> dict:
        return {"birth": self.birth, "length": "inf" if self.infinite else int(self.length)}


Barcode = tuple  # tuple[Bar, ...]


def barcode_to_json(bars) -> list[dict]:
    return [b.to_dict() for b in bars]


def barcode_from_json(doc) -> tuple[Bar, ...]:
    return tuple(Bar(int(d["birth"]), INF if d["length"] == "inf" else int(d["length"])) for d in doc)


def _complex_of(k, reduce: bool) -> CochainComplex:
    from .cohomology import _as_sset
    k = _as_sset(k)
    if reduce:
        return space_cohomology(k).complex
    return cochains(k)


def default_degree(k: C2SimplicialSet) -> int:
    return max(k.dim, 0) + 2


def borel_module(k, n_max: int | None = None, reduce: bool = True) -> GradedF2zModule:
    """Borel cohomology of ``k`` in degrees ``0..n_max`` as a module over F2[z].

    ``n_max`` defaults to ``dim k + 2``.  The double complex keeps
    ``n_max + 1`` columns, which leaves every degree up to ``n_max`` exact.
    """
    from .cohomology import _as_sset
    k = _as_sset(k)
    dim = max(k.dim, 0)
    n_max = default_degree(k) if n_max is None else n_max
    if n_max < dim + 2:
        raise ContractError(f"need n_max >= dim + 2 = {dim + 2}")
    if k.truncated:
        raise ContractError("Borel cohomology needs an untruncated model")
    c = _complex_of(k, reduce)
    bc = BorelComplex(c, n_max + 1)
    coh = Cohomology(bc.as_cochain_complex(), n_max + 1)
    dims = tuple(coh.dims[:n_max + 1])
    z = []
    for n in range(n_max):
        cols = [coh.coords(n + 1, bc.shift(n, r)) for r in coh.reps[n]]
        z.append(F2Matrix.from_columns(cols, dims[n + 1]))
    stab = dim + 1
    for n in range(stab, n_max):
        if not (dims[n] == dims[n + 1] and rank(z[n]) == dims[n]):
            raise StabilizationFailure(n)
    return GradedF2zModule(dims, tuple(z), stab)


def barcode(m: GradedF2zModule) -> tuple[Bar, ...]:
    """Interval decomposition of the persistence module ``H^0 -> H^1 -> ... -> H^N``.

    Bars are read off the rank invariant: the number of intervals exactly
    ``[i, j]`` is ``r(i,j) - r(i-1,j) - r(i,j+1) + r(i-1,j+1)``.  Bars still
    alive at ``N`` lie past the stable degree and are reported infinite.
    """
    top = m.top
    r: dict[tuple[int, int], int] = {}

    def rk(i, j):
        if i < 0 or j > top or i > j:
            return 0
        if (i, j) not in r:
            r[(i, j)] = m.dims[i] if i == j else m.z_power_rank(i, j)
        return r[(i, j)]

    bars = []
    for i in range(top + 1):
        for j in range(i, top + 1):
            count = rk(i, j) - rk(i - 1, j) - rk(i, j + 1) + rk(i - 1, j + 1)
            if count < 0:
                raise AssertionError("negative interval multiplicity")
            length = INF if j == top else j - i + 1
            if count and length == INF and i > m.stab_degree:
                raise AssertionError(f"free summand born at {i} above the stable degree")
            bars.extend([Bar(i, length)] * count)
    bars.sort(key=lambda b: (b.birth, b.length))
    for n in range(top + 1):
        alive = sum(1 for b in bars if b.birth <= n < b.birth + b.length)
        if alive != m.dims[n]:
            raise AssertionError("barcode does not account for the module dimensions")
    return tuple(bars)


def torsion_order(m: GradedF2zModule | tuple) -> int:
    bars = m if isinstance(m, tuple) else barcode(m)
    return max((int(b.length) for b in bars if not b.infinite), default=0)


def e2_page(k, q_max: int | None = None) -> list[tuple[int, int]]:
    """Per row q: (dim E2^{0,q}, dim E2^{p,q} for any p >= 1)."""
    mod = cohomology_with_action(k, q_max)
    return [(group_cohomology_dim(s, 0), group_cohomology_dim(s, 1)) for s in mod.sigma]


def e2_total(rows: list[tuple[int, int]], n: int) -> int:
    total = 0
    for q, (h0, h1) in enumerate(rows):
        if q == n:
            total += h0
        elif q < n:
            total += h1
    return total


def degenerates_at_e2(k, module: GradedF2zModule | None = None) -> tuple[bool, int | None]:
    """Compare the E2 antidiagonals with Borel cohomology for n <= dim + 1."""
    from .cohomology import _as_sset
    k = _as_sset(k)
    m = module if module is not None else borel_module(k)
    rows = e2_page(k)
    for n in range(max(k.dim, 0) + 2):
        if e2_total(rows, n) != m.dims[n]:
            return False, n
    return True, None


@dataclass(frozen=True)
class SpectralPages:
    """Dims of E_r^{p,q} and ranks of d_r out of (p,q), for the columns that are exact."""

    pages: dict[int, dict[tuple[int, int], int]]
    ranks: dict[int, dict[tuple[int, int], int]]

    def first_nonzero_differential(self) -> int | None:
        for r in sorted(self.ranks):
            if any(self.ranks[r].values()):
                return r
        return None

    def to_csv(self) -> str:
        lines = ["r,p,q,dim,rank_out"]
        for r in sorted(self.pages):
            for (p, q), d in sorted(self.pages[r].items()):
                lines.append(f"{r},{p},{q},{d},{self.ranks[r][(p, q)]}")
        return "\n".join(lines) + "\n"


def spectral_pages(k, r_max: int, reduce: bool = True) -> SpectralPages:
    """Pages of the column filtration of the double complex, for 2 <= r <= r_max.

    With ``A_r^p`` the cochains in columns >= p whose differential lies in
    columns >= p + r, ``E_r^p = A_r^p / (A_{r-1}^{p+1} + d A_{r-1}^{p-r+1})``.
    """
    from .cohomology import _as_sset
    k = _as_sset(k)
    dim = max(k.dim, 0)
    n_max = dim + 2
    c = _complex_of(k, reduce)
    columns = n_max + r_max + 2
    bc = BorelComplex(c, columns)

    def A(n, p, r):
        """Basis of A_r^p in total degree n; p may be negative (all columns, d into F^{p+r})."""
        if n < 0 or n > bc.top:
            return []
        idx = bits(bc.column_mask(n, max(p, 0)))
        if n == bc.top:
            return [1 << i for i in idx]
        keep = bc.column_mask(n + 1, 0, max(p + r, 0))
        images = [bc.d[n][i] & keep for i in idx]
        out = []
        for v in kernel_of_columns(images):
            w = 0
            for t in bits(v):
                w |= 1 << idx[t]
            out.append(w)
        return out

    def apply_d(n, vecs):
        out = []
        for v in vecs:
            w = 0
            for i in bits(v):
                w ^= bc.d[n][i]
            out.append(w)
        return out

    cache = {}

    def dim_A(n, p, r):
        key = (n, max(p, 0), max(p + r, 0))
        if key not in cache:
            cache[key] = A(n, p, r)
        return cache[key]

    pages: dict[int, dict] = {}
    ranks: dict[int, dict] = {}
    p_limit = columns - r_max - 1
    for r in range(2, r_max + 1):
        pages[r], ranks[r] = {}, {}
        for n in range(n_max + 1):
            for p in range(0, min(n, p_limit) + 1):
                q = n - p
                if q > dim:
                    continue
                a = dim_A(n, p, r)
                below = dim_A(n, p + 1, r - 1) + apply_d(n - 1, dim_A(n - 1, p - r + 1, r - 1))
                e = len(a) - rank_of_vectors(below)
                kernel_side = dim_A(n, p, r + 1) + dim_A(n, p + 1, r - 1)
                pages[r][(p, q)] = e
                ranks[r][(p, q)] = len(a) - rank_of_vectors(kernel_side)
    return SpectralPages(pages, ranks)


def forgetful_ranks(k, reduce: bool = True) -> list[int]:
    """Rank of the restriction H^n_{C2}(k) -> H^n(k) for n <= dim k.

    A Borel cocycle's column-0 component is an ordinary cocycle and is its image.
    """
    from .cohomology import _as_sset
    k = _as_sset(k)
    dim = max(k.dim, 0)
    c = _complex_of(k, reduce)
    bc = BorelComplex(c, dim + 2)
    total = Cohomology(bc.as_cochain_complex(), dim + 1)
    base = Cohomology(c, dim)
    out = []
    for n in range(dim + 1):
        start = bc.offset[n][(0, n)]
        mask = (1 << c.dims[n]) - 1
        images = [base.coords(n, (r >> start) & mask) for r in total.reps[n]]
        out.append(rank_of_vectors(images))
    return out
