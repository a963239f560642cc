"""Mod 2 cochain cohomology with the induced involution, and C2 group cohomology.

Cochain complexes here are permutation complexes: each degree has a basis on
which the involution acts by a permutation ``perm[q]``.  Large complexes are
first shrunk by equivariant Gaussian elimination (:func:`reduce_complex`), which
keeps the equivariant chain homotopy type and therefore everything computed
downstream.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Sequence

from .complexes import ContractError
from .f2 import Echelon, F2Matrix, bits, kernel_of_columns, low_bit, rank, solve_all
from .simplicial import C2SimplicialSet, SimplicialMap


@dataclass
class CochainComplex:
    """``cob[q][j]`` is the coboundary of basis cochain ``j`` of degree ``q`` as a bitset."""

    dims: list[int]
    cob: list[list[int]]
    perm: list[list[int]]
    faithful_degree: int = 10**9

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def check(self) -> bool:
        for q in range(self.top - 1):
            for j in range(self.dims[q]):
                acc = 0
                for y in bits(self.cob[q][j]):
                    acc ^= self.cob[q + 1][y]
                if acc:
                    return False
        for q in range(self.top + 1):
            p = self.perm[q]
            for j in range(self.dims[q]):
                if p[p[j]] != j:
                    return False
                if q < self.top and permute(self.cob[q][p[j]], self.perm[q + 1]) != self.cob[q][j]:
                    return False
        return True


def permute(v: int, perm: Sequence[int]) -> int:
    out = 0
    for i in bits(v):
        out |= 1 << perm[i]
    return out


def cochains(k: C2SimplicialSet) -> CochainComplex:
    """Normalized F2 cochains of ``k`` with the involution acting by pullback."""
    top = k.top_degree
    dims = k.counts()
    cob = [[0] * dims[q] for q in range(top + 1)]
    for m in range(1, top + 1):
        for y, fs in enumerate(k.faces[m]):
            for eta, x in fs:
                if eta[-1] + 1 == len(eta):
                    cob[m - 1][x] ^= 1 << y
    return CochainComplex(dims, cob, [list(p) for p in k.involution], k.faithful_degree)


@dataclass
class Reduction:
    """An equivariantly reduced complex with the maps back and forth.

    ``lift[q][i]`` is the original cochain representing reduced basis element
    ``i``; :meth:`project` carries an original cochain into the reduced one.
    The two maps are mutually inverse chain homotopy equivalences.
    """

    original: CochainComplex
    reduced: CochainComplex
    kept: list[list[int]]
    lift: list[list[int]]
    log: list[tuple[int, int, int, frozenset]] = field(repr=False)

    def lift_cochain(self, q: int, v: int) -> int:
        out = 0
        for i in bits(v):
            out ^= self.lift[q][i]
        return out

    def project(self, q: int, v: int) -> int:
        c = set(bits(v))
        for dq, x, y, gamma in self.log:
            if dq == q:
                c.discard(x)
            elif dq + 1 == q and y in c:
                c.discard(y)
                c ^= gamma
        pos = {x: i for i, x in enumerate(self.kept[q])}
        out = 0
        for x in c:
            out |= 1 << pos[x]
        return out


def reduce_complex(c: CochainComplex, track: bool = True) -> Reduction:
    """Cancel basis pairs ``(x, y)`` with ``y`` in the coboundary of ``x``, equivariantly.

    Allowed pivots: both cells fixed, or both in free orbits with ``σy`` absent
    from the coboundary of ``x`` (then the pair of orbits cancels over
    F2[C2]).  A fixed cell is never cancelled against a free orbit.
    """
    top = c.top
    perm = c.perm
    cob = [{x: set(bits(c.cob[q][x])) for x in range(c.dims[q])} for q in range(top + 1)]
    bnd: list[dict[int, set]] = [{y: set() for y in range(c.dims[q])} for q in range(top + 1)]
    for q in range(top):
        for x, ys in cob[q].items():
            for y in ys:
                bnd[q + 1][y].add(x)
    lift = [{x: 1 << x for x in range(c.dims[q])} for q in range(top + 1)] if track else None
    log: list = []

    def eliminate(q, x, y):
        dx = cob[q][x]
        if track:
            log.append((q, x, y, frozenset(dx - {y})))
        for x2 in sorted(bnd[q + 1][y]):
            if x2 == x:
                continue
            cob[q][x2] ^= dx
            for y2 in dx:
                b = bnd[q + 1][y2]
                if x2 in b:
                    b.discard(x2)
                else:
                    b.add(x2)
            if track:
                lift[q][x2] ^= lift[q][x]
        for w in bnd[q][x]:
            cob[q - 1][w].discard(x)
        for y2 in dx:
            if y2 != y:
                bnd[q + 1][y2].discard(x)
        del cob[q][x], bnd[q][x]
        if track:
            del lift[q][x]
        if q + 1 < top:
            for z in cob[q + 1][y]:
                bnd[q + 2][z].discard(y)
        del cob[q + 1][y], bnd[q + 1][y]

    def pivot_for(q, y):
        """Cheapest admissible x for y, or None."""
        sy = perm[q + 1][y]
        best = None
        for x in sorted(bnd[q + 1][y]):
            sx = perm[q][x]
            if (sx == x) != (sy == y):
                continue
            if sy != y and sy in cob[q][x]:
                continue
            cost = len(cob[q][x])
            if best is None or cost < best[0]:
                best = (cost, x)
        return best

    threshold = 1
    while True:
        changed = False
        for q in range(top - 1, -1, -1):
            for y in sorted(bnd[q + 1], key=lambda y: (len(bnd[q + 1][y]), y)):
                if y not in bnd[q + 1] or not bnd[q + 1][y]:
                    continue
                if len(bnd[q + 1][y]) > threshold:
                    break
                hit = pivot_for(q, y)
                if hit is None:
                    continue
                cost, x = hit
                if (cost - 1) * (len(bnd[q + 1][y]) - 1) > threshold * threshold:
                    continue
                sx, sy = perm[q][x], perm[q + 1][y]
                eliminate(q, x, y)
                if sy != y:
                    eliminate(q, sx, sy)
                changed = True
        if not changed:
            if threshold > max(c.dims, default=0):
                break
            threshold *= 2

    kept = [sorted(cob[q]) for q in range(top + 1)]
    pos = [{x: i for i, x in enumerate(kept[q])} for q in range(top + 1)]
    dims = [len(k) for k in kept]
    new_cob = []
    for q in range(top + 1):
        row = []
        for x in kept[q]:
            v = 0
            for y in cob[q][x]:
                v |= 1 << pos[q + 1][y]
            row.append(v)
        new_cob.append(row)
    new_perm = [[pos[q][perm[q][x]] for x in kept[q]] for q in range(top + 1)]
    reduced = CochainComplex(dims, new_cob, new_perm, c.faithful_degree)
    lifts = [[lift[q][x] for x in kept[q]] for q in range(top + 1)] if track else []
    return Reduction(c, reduced, kept, lifts, log)


class Cohomology:
    """Cohomology of a cochain complex with a fixed basis of representatives per degree."""

    def __init__(self, c: CochainComplex, max_degree: int | None = None):
        self.complex = c
        top = c.top if max_degree is None else min(max_degree, c.top)
        self.top = top
        self.reps: list[list[int]] = []
        self._ech: list[Echelon] = []
        for q in range(top + 1):
            images = c.cob[q] if q < c.top else [0] * c.dims[q]
            cycles = kernel_of_columns(images)
            ech = Echelon()
            if q > 0:
                for b in c.cob[q - 1]:
                    ech.add(b)
            reps = []
            for z in cycles:
                r, _ = ech.reduce(z)
                if r:
                    ech.pivots[low_bit(r)] = (r, 1 << len(reps))
                    reps.append(r)
            self.reps.append(reps)
            self._ech.append(ech)

    @property
    def dims(self) -> list[int]:
        return [len(r) for r in self.reps]

    def coords(self, q: int, cocycle: int) -> int:
        rest, tag = self._ech[q].reduce(cocycle)
        if rest:
            raise ValueError(f"cochain is not a cocycle in degree {q}")
        return tag

    def sigma_matrix(self, q: int) -> F2Matrix:
        perm = self.complex.perm[q]
        cols = [self.coords(q, permute(r, perm)) for r in self.reps[q]]
        return F2Matrix.from_columns(cols, len(self.reps[q]))


@dataclass(frozen=True)
class GradedC2Module:
    """Mod 2 cohomology degree by degree with the matrices of the involution."""

    dims: tuple[int, ...]
    sigma: tuple[F2Matrix, ...]

    def __post_init__(self):
        for d, s in zip(self.dims, self.sigma):
            if s.shape != (d, d) or not (s @ s).is_identity():
                raise ValueError("involution matrix must square to the identity")

    @property
    def trivial_action(self) -> bool:
        return all(s.is_identity() for s in self.sigma)


@dataclass(frozen=True)
class ModuleMap:
    """Degreewise linear map; ``matrices[q]`` has shape (target dim, source dim)."""

    source: GradedC2Module
    target: GradedC2Module
    matrices: tuple[F2Matrix, ...]


def _validate_degree(k: C2SimplicialSet, max_degree: int | None) -> int:
    top = k.dim if max_degree is None else max_degree
    if top > k.faithful_degree:
        raise ContractError(f"degree {top} lies beyond the faithful range {k.faithful_degree} of a truncated model")
    return top


class SpaceCohomology:
    """Reduced cochains and cohomology of a simplicial set, computed once and reused."""

    def __init__(self, k: C2SimplicialSet, reduce: bool = True):
        self.space = k
        self.raw = cochains(k)
        self.reduction = reduce_complex(self.raw) if reduce else None
        self.complex = self.reduction.reduced if reduce else self.raw
        top = min(k.dim, k.faithful_degree) if k.dim >= 0 else -1
        self.cohomology = Cohomology(self.complex, top)

    def betti(self) -> list[int]:
        return self.cohomology.dims

    def module(self) -> GradedC2Module:
        h = self.cohomology
        return GradedC2Module(tuple(h.dims), tuple(h.sigma_matrix(q) for q in range(h.top + 1)))

    def rep_original(self, q: int, i: int) -> int:
        r = self.cohomology.reps[q][i]
        return self.reduction.lift_cochain(q, r) if self.reduction else r

    def coords_original(self, q: int, cocycle: int) -> int:
        c = self.reduction.project(q, cocycle) if self.reduction else cocycle
        return self.cohomology.coords(q, c)


_CACHE: "weakref.WeakKeyDictionary[C2SimplicialSet, SpaceCohomology]" = weakref.WeakKeyDictionary()


def space_cohomology(k: C2SimplicialSet) -> SpaceCohomology:
    sc = _CACHE.get(k)
    if sc is None:
        sc = _CACHE[k] = SpaceCohomology(k)
    return sc


def betti(k, max_degree: int | None = None) -> list[int]:
    """Mod 2 Betti numbers through ``max_degree`` (default: the dimension)."""
    k = _as_sset(k)
    top = _validate_degree(k, max_degree)
    b = space_cohomology(k).betti()
    return (b + [0] * (top + 1))[:top + 1]


def cohomology_with_action(k, max_degree: int | None = None) -> GradedC2Module:
    k = _as_sset(k)
    top = _validate_degree(k, max_degree)
    mod = space_cohomology(k).module()
    dims = list(mod.dims)
    sig = list(mod.sigma)
    while len(dims) <= top:
        dims.append(0)
        sig.append(F2Matrix.zeros(0, 0))
    return GradedC2Module(tuple(dims[:top + 1]), tuple(sig[:top + 1]))


def _as_sset(k) -> C2SimplicialSet:
    from .complexes import C2Complex
    from .simplicial import to_simplicial_set
    if isinstance(k, C2Complex):
        return to_simplicial_set(k)
    return k


def induced_map(f: SimplicialMap, max_degree: int | None = None) -> ModuleMap:
    """Map ``H(target) -> H(source)`` induced by a simplicial map."""
    src, tgt = space_cohomology(f.source), space_cohomology(f.target)
    top = src.cohomology.top if max_degree is None else max_degree
    top = min(top, tgt.cohomology.top)
    mats = []
    for q in range(top + 1):
        cols_pull = f.pullback_columns(q)
        cols = []
        for i in range(len(tgt.cohomology.reps[q])):
            c = tgt.rep_original(q, i)
            pulled = 0
            for t in bits(c):
                pulled ^= cols_pull[t]
            cols.append(src.coords_original(q, pulled))
        mats.append(F2Matrix.from_columns(cols, len(src.cohomology.reps[q])))
    sm, tm = src.module(), tgt.module()
    cut = lambda m: GradedC2Module(m.dims[:top + 1], m.sigma[:top + 1])
    return ModuleMap(cut(tm), cut(sm), tuple(mats))


def one_plus(sigma: F2Matrix) -> F2Matrix:
    return sigma + F2Matrix.identity(sigma.nrows)


def group_cohomology_dim(sigma: F2Matrix, p: int) -> int:
    """dim H^p(C2, A) for the F2-space A with involution matrix ``sigma``.

    Computed from invariants modulo norms: degree 0 gives the invariants,
    every positive degree gives ker(1+σ)/im(1+σ).
    """
    if p < 0:
        raise ContractError("group cohomology degree must be non-negative")
    n = sigma.nrows
    r = rank(one_plus(sigma))
    invariants = n - r
    return invariants if p == 0 else invariants - r


def equivariant_decomposition(sigma: F2Matrix) -> tuple[int, int]:
    """(a, b) with A ≅ F2^a ⊕ F2[C2]^b."""
    b = rank(one_plus(sigma))
    return sigma.nrows - 2 * b, b


def _check_equivariant(f: ModuleMap):
    for q, m in enumerate(f.matrices):
        if m.shape != (f.target.dims[q], f.source.dims[q]):
            raise ContractError(f"map has wrong shape in degree {q}")
        if m @ f.source.sigma[q] != f.target.sigma[q] @ m:
            raise ContractError(f"map does not commute with the involutions in degree {q}")


def equivariant_section(f: ModuleMap) -> list[F2Matrix] | None:
    """Degreewise ``s`` with ``f s = id`` and ``s σ = σ s``, or None if there is none."""
    _check_equivariant(f)
    out = []
    for q, m in enumerate(f.matrices):
        a, b = f.source.dims[q], f.target.dims[q]
        sa, sb = f.source.sigma[q], f.target.sigma[q]

        def var(i, j):
            return 1 << (i * b + j)

        rows, rhs = [], []
        for kk in range(b):
            for j in range(b):
                row = 0
                for i in bits(m.rows[kk]):
                    row ^= var(i, j)
                rows.append(row)
                rhs.append(1 if kk == j else 0)
        for i in range(a):
            for j in range(b):
                row = 0
                for l in range(b):
                    if sb[l, j]:
                        row ^= var(i, l)
                for l in bits(sa.rows[i]):
                    row ^= var(l, j)
                rows.append(row)
                rhs.append(0)
        x = solve_all(F2Matrix(tuple(rows), a * b), F2Matrix(tuple(rhs), 1))
        if x is None:
            return None
        s_rows = tuple(sum(x.rows[i * b + j] << j for j in range(b)) for i in range(a))
        out.append(F2Matrix(s_rows, b))
    return out


def equivariant_section_exists(f: ModuleMap) -> bool:
    return equivariant_section(f) is not None
