"""Finite simplicial sets with an involution, and the constructions built on them.

A simplex of degree ``m`` is stored in Eilenberg-Zilber normal form as a pair
``(eta, x)``: ``eta`` is a monotone surjection ``[m] -> [k]`` written as the
tuple of its values and ``x`` is the index of a nondegenerate ``k``-simplex.
The simplex is nondegenerate exactly when ``eta`` is the identity.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .complexes import C2Complex, ContractError, NotFixedFaithful, barycentric_subdivide, orbit_order, order_compatible

Surj = tuple  # values of a monotone surjection [m] -> [k]
Simplex = tuple  # (Surj, int)


def identity(k: int) -> Surj:
    return tuple(range(k + 1))


def is_identity(eta: Surj) -> bool:
    return eta[-1] + 1 == len(eta)


def collapse_mask(eta: Surj) -> int:
    """Bit ``i`` set iff ``eta(i) == eta(i+1)``: the indices of the degeneracy word."""
    out = 0
    for i in range(len(eta) - 1):
        if eta[i] == eta[i + 1]:
            out |= 1 << i
    return out


def degeneracy_word(eta: Surj) -> list[int]:
    return [i for i in range(len(eta) - 1) if eta[i] == eta[i + 1]]


def surj_from_word(word: Sequence[int], m: int) -> Surj:
    collapsed = set(word)
    vals = [0]
    for i in range(m):
        vals.append(vals[-1] + (0 if i in collapsed else 1))
    return tuple(vals)


def surjections(m: int, k: int):
    """All monotone surjections ``[m] -> [k]``, in lexicographic order of their jump sets."""
    for jumps in itertools.combinations(range(m), k):
        vals = [0]
        js = set(jumps)
        for i in range(m):
            vals.append(vals[-1] + (1 if i in js else 0))
        yield tuple(vals)


def normalize(members: Sequence[Simplex]) -> tuple[Surj, list[Simplex]]:
    """Factor a tuple of same-degree simplices through their common degeneracy.

    Returns ``(mu, reduced)`` where ``mu`` collapses exactly the indices at
    which every member is degenerate and ``reduced`` is jointly nondegenerate.
    """
    common = -1
    for eta, _ in members:
        common &= collapse_mask(eta)
    m = len(members[0][0]) - 1
    if not common & ((1 << m) - 1):
        return identity(m), list(members)
    mu = [0]
    for i in range(m):
        mu.append(mu[-1] + (0 if (common >> i) & 1 else 1))
    r = mu[-1]
    reduced = []
    for eta, x in members:
        vals = [0] * (r + 1)
        for t in range(m + 1):
            vals[mu[t]] = eta[t]
        reduced.append((tuple(vals), x))
    return tuple(mu), reduced


@dataclass(eq=False)
class C2SimplicialSet:
    """Nondegenerate simplices, face tables and an involution, degree by degree.

    ``faces[m][j]`` lists the ``m+1`` faces of nondegenerate simplex ``j`` of
    degree ``m`` as normal-form simplices of degree ``m-1``; ``involution[m][j]``
    is the index of its image.  When ``truncated`` is set, the simplices above
    ``top_degree`` were not generated and cohomology is trusted only below it.
    """

    labels: list[list[str]]
    faces: list[list[tuple[Simplex, ...]]]
    involution: list[list[int]]
    basepoint: int | None = None
    fixed_faithful: bool = True
    truncated: bool = False
    _index: list[dict] | None = field(default=None, repr=False)
    keys: list[list] | None = field(default=None, repr=False)

    @property
    def top_degree(self) -> int:
        return len(self.labels) - 1

    @property
    def dim(self) -> int:
        for m in range(len(self.labels) - 1, -1, -1):
            if self.labels[m]:
                return m
        return -1

    @property
    def faithful_degree(self) -> int:
        """Highest degree whose cohomology this model computes correctly."""
        return self.top_degree - 1 if self.truncated else 10**9

    def counts(self) -> list[int]:
        return [len(x) for x in self.labels]

    @property
    def based(self) -> bool:
        return self.basepoint is not None

    def face(self, s: Simplex, i: int) -> Simplex:
        """``d_i`` of an arbitrary simplex in normal form."""
        eta, x = s
        m = len(eta) - 1
        if m == 0:
            raise ValueError("0-simplices have no faces")
        v = eta[i]
        rest = eta[:i] + eta[i + 1:]
        if (i > 0 and eta[i - 1] == v) or (i < m and eta[i + 1] == v):
            return (rest, x)
        k = eta[-1]
        zeta, y = self.faces[k][x][v]
        # eta o delta_i = delta_v o eta', then apply d_v x = zeta^* y
        return (tuple(zeta[t - 1 if t > v else t] for t in rest), y)

    def sigma(self, s: Simplex) -> Simplex:
        eta, x = s
        return (eta, self.involution[eta[-1]][x])

    def degenerate_simplices(self, m: int) -> list[Simplex]:
        """Every ``m``-simplex, degenerate or not."""
        out = []
        for k in range(min(m, self.top_degree) + 1):
            for eta in surjections(m, k):
                out.extend((eta, x) for x in range(len(self.labels[k])))
        return out

    def total_degeneracy(self, x: int, m: int) -> Simplex:
        return ((0,) * (m + 1), x)

    def fixed_indices(self, m: int) -> list[int]:
        return [j for j, t in enumerate(self.involution[m]) if t == j]

    def index(self, m: int) -> dict:
        if self._index is None:
            self._index = [{lab: j for j, lab in enumerate(ls)} for ls in self.labels]
        return self._index[m]

    def keyed_index(self, m: int) -> dict:
        return {key: j for j, key in enumerate(self.keys[m])}

    def nondegenerate_face_sets(self, m: int) -> list[int]:
        """For each nondegenerate ``m``-simplex, the bitset of its nondegenerate faces mod 2."""
        out = []
        for fs in self.faces[m]:
            b = 0
            for eta, y in fs:
                if is_identity(eta):
                    b ^= 1 << y
            out.append(b)
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** m * n for m, n in enumerate(self.counts()))

    def check(self) -> list[str]:
        """Exhaustive check of the simplicial identities d_i d_j = d_{j-1} d_i and involution laws."""
        problems = []
        for m in range(2, self.top_degree + 1):
            for x in range(len(self.labels[m])):
                s = (identity(m), x)
                for j in range(m + 1):
                    for i in range(j):
                        a = self.face(self.face(s, j), i)
                        b = self.face(self.face(s, i), j - 1)
                        if a != b:
                            problems.append(f"d{i}d{j} != d{j - 1}d{i} on {self.labels[m][x]}")
        for m in range(self.top_degree + 1):
            inv = self.involution[m]
            for x in range(len(inv)):
                if inv[inv[x]] != x:
                    problems.append(f"involution not of order 2 on {self.labels[m][x]}")
                if m:
                    s = (identity(m), x)
                    for i in range(m + 1):
                        if self.sigma(self.face(s, i)) != self.face(self.sigma(s), i):
                            problems.append(f"involution does not commute with d{i} on {self.labels[m][x]}")
        if self.basepoint is not None and self.involution[0][self.basepoint] != self.basepoint:
            problems.append("basepoint not fixed")
        return problems

    # serialization

    def to_dict(self) -> dict:
        doc = {
            "top_degree": self.top_degree,
            "simplices": [list(ls) for ls in self.labels],
            "faces": [[[[degeneracy_word(eta), y] for eta, y in fs] for fs in deg] for deg in self.faces],
            "involution": [list(inv) for inv in self.involution],
            "fixed_faithful": self.fixed_faithful,
            "truncated": self.truncated,
        }
        if self.basepoint is not None:
            doc["basepoint"] = self.basepoint
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: Mapping) -> "C2SimplicialSet":
        labels = [list(ls) for ls in doc["simplices"]]
        faces = []
        for m, deg in enumerate(doc["faces"]):
            faces.append([tuple((surj_from_word(w, m - 1), y) for w, y in fs) for fs in deg])
        while len(faces) < len(labels):
            faces.append([() for _ in labels[len(faces)]])
        ss = cls(labels, faces, [list(v) for v in doc["involution"]], doc.get("basepoint"),
                 bool(doc.get("fixed_faithful", True)), bool(doc.get("truncated", False)))
        return ss

    @classmethod
    def from_json(cls, text: str) -> "C2SimplicialSet":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SimplicialMap:
    """Map between simplicial sets given on nondegenerate simplices."""

    source: C2SimplicialSet
    target: C2SimplicialSet
    images: list[list[Simplex]]

    def apply(self, s: Simplex) -> Simplex:
        eta, x = s
        zeta, y = self.images[eta[-1]][x]
        return (tuple(zeta[t] for t in eta), y)

    def pullback_columns(self, m: int) -> list[int]:
        """Cochain pullback in degree ``m``: column ``t`` is the set of source simplices hitting ``t``."""
        cols = [0] * len(self.target.labels[m])
        for s, (eta, y) in enumerate(self.images[m]):
            if is_identity(eta):
                cols[y] |= 1 << s
        return cols




class _Builder:
    """Accumulates nondegenerate simplices per degree keyed by a canonical value."""

    def __init__(self, top: int):
        self.keys: list[list] = [[] for _ in range(top + 1)]
        self.index: list[dict] = [{} for _ in range(top + 1)]

    def add(self, m: int, key) -> int:
        idx = self.index[m]
        j = idx.get(key)
        if j is None:
            j = idx[key] = len(self.keys[m])
            self.keys[m].append(key)
        return j

    def finish(self, label: Callable, face_of: Callable, sigma_of: Callable, basepoint,
               fixed_faithful: bool, truncated: bool = False) -> C2SimplicialSet:
        """``face_of(key, i, m)`` returns ``(mu, face_key)`` with ``face_key`` in degree ``mu[-1]``."""
        keys, index = self.keys, self.index
        top = len(keys) - 1
        while top > 0 and not keys[top] and not truncated:
            top -= 1
        labels, faces, inv = [], [], []
        for m in range(top + 1):
            labels.append([label(key, m) for key in keys[m]])
            if m == 0:
                faces.append([() for _ in keys[m]])
            else:
                row = []
                for key in keys[m]:
                    fs = []
                    for i in range(m + 1):
                        mu, fkey = face_of(key, i, m)
                        fs.append((mu, index[mu[-1]][fkey]))
                    row.append(tuple(fs))
                faces.append(row)
            inv.append([index[m][sigma_of(key, m)] for key in keys[m]])
        out = C2SimplicialSet(labels, faces, inv, basepoint, fixed_faithful, truncated)
        out.keys = keys[:top + 1]
        return out


def from_ordered_complex(k: C2Complex, order: Sequence) -> C2SimplicialSet:
    """Simplicial set of ``k`` with each simplex's vertices listed in ``order``.

    The involution must be monotone on every simplex for this order.
    """
    pos = {v: i for i, v in enumerate(order)}
    bld = _Builder(max(k.dim, 0))
    for s in sorted(k.simplices, key=lambda s: (len(s), sorted(pos[v] for v in s))):
        bld.add(len(s) - 1, tuple(sorted(s, key=pos.__getitem__)))
    inv = k.involution

    def face_of(key, i, m):
        return identity(m - 1), key[:i] + key[i + 1:]

    def sigma_of(key, m):
        img = tuple(inv[v] for v in key)
        if any(pos[img[t]] > pos[img[t + 1]] for t in range(m)):
            raise ContractError("vertex order is not compatible with the involution")
        return img

    def label(key, m):
        return str(key[0]) if m == 0 else "(" + ",".join(map(str, key)) + ")"

    bp = bld.index[0][(k.basepoint,)] if k.basepoint is not None else None
    return bld.finish(label, face_of, sigma_of, bp, fixed_faithful=k.regular)


def to_simplicial_set(k: C2Complex) -> C2SimplicialSet:
    """Order the vertices so the involution is monotone on simplices, subdividing once if needed."""
    if order_compatible(k):
        return from_ordered_complex(k, orbit_order(k))
    sd = barycentric_subdivide(k)
    return from_ordered_complex(sd, sd.vertices)


def _require_complete(*sets: C2SimplicialSet):
    for s in sets:
        if s.truncated:
            raise ContractError("construction needs an untruncated simplicial set")


def simplex_label(k: C2SimplicialSet, s: Simplex) -> str:
    eta, x = s
    base = k.labels[eta[-1]][x]
    word = degeneracy_word(eta)
    if not word:
        return base
    return "s" + "".join(str(i) for i in reversed(word)) + base


def product(a: C2SimplicialSet, b: C2SimplicialSet, swap: bool = False) -> C2SimplicialSet:
    """Cartesian product; nondegenerate simplices are the jointly nondegenerate pairs.

    The involution acts diagonally, or by exchanging the coordinates when
    ``swap`` is set (which needs ``a is b``).
    """
    _require_complete(a, b)
    if swap and a is not b:
        raise ContractError("coordinate swap needs equal factors")
    top = a.dim + b.dim
    bld = _Builder(top)
    for m in range(top + 1):
        for p in range(min(m, a.dim) + 1):
            for q in range(max(m - p, 0), min(m, b.dim) + 1):
                sb = [(eb, collapse_mask(eb)) for eb in surjections(m, q)]
                for ea in surjections(m, p):
                    ma = collapse_mask(ea)
                    for eb, mb in sb:
                        if ma & mb:
                            continue
                        for x in range(len(a.labels[p])):
                            for y in range(len(b.labels[q])):
                                bld.add(m, ((ea, x), (eb, y)))

    def face_of(key, i, m):
        mu, red = normalize([a.face(key[0], i), b.face(key[1], i)])
        return mu, (red[0], red[1])

    if swap:
        def sigma_of(key, m):
            return (key[1], key[0])
    else:
        def sigma_of(key, m):
            return (a.sigma(key[0]), b.sigma(key[1]))

    def label(key, m):
        return "(" + simplex_label(a, key[0]) + "," + simplex_label(b, key[1]) + ")"

    bp = None
    if a.basepoint is not None and b.basepoint is not None:
        bp = bld.index[0][(((0,), a.basepoint), ((0,), b.basepoint))]
    return bld.finish(label, face_of, sigma_of, bp, a.fixed_faithful and b.fixed_faithful)


def wedge(a: C2SimplicialSet, b: C2SimplicialSet, swap: bool = False) -> C2SimplicialSet:
    """One-point union along the basepoints.

    With ``swap`` the involution exchanges the summands (``a is b`` required);
    otherwise each summand keeps its own involution.
    """
    _require_complete(a, b)
    if a.basepoint is None or b.basepoint is None:
        raise ContractError("wedge needs based operands")
    if swap and a is not b:
        raise ContractError("summand swap needs equal summands")
    parts = (a, b)
    bld = _Builder(max(a.dim, b.dim, 0))
    for side, k in enumerate(parts):
        for m in range(k.dim + 1):
            for x in range(len(k.labels[m])):
                if side == 1 and m == 0 and x == b.basepoint:
                    continue
                bld.add(m, (side, x))

    def canon(side, x, m):
        if side == 1 and m == 0 and x == b.basepoint:
            return (0, a.basepoint)
        return (side, x)

    def face_of(key, i, m):
        side, x = key
        eta, y = parts[side].face((identity(m), x), i)
        return eta, canon(side, y, eta[-1])

    def sigma_of(key, m):
        side, x = key
        if swap:
            return canon(1 - side, x, m)
        return canon(side, parts[side].involution[m][x], m)

    def label(key, m):
        side, x = key
        return ("L" if side == 0 else "R") + ":" + parts[side].labels[m][x]

    return bld.finish(label, face_of, sigma_of, bld.index[0][(0, a.basepoint)],
                      a.fixed_faithful and b.fixed_faithful)


def forget_action(k: C2SimplicialSet) -> C2SimplicialSet:
    return C2SimplicialSet(k.labels, k.faces, [list(range(len(ls))) for ls in k.labels],
                           k.basepoint, k.fixed_faithful, k.truncated)


def combine(kind: str, a: C2SimplicialSet, b: C2SimplicialSet | None = None) -> C2SimplicialSet:
    """Wedge, product, additive induction or multiplicative induction.

    The inductions use the underlying space of ``a`` (its involution is
    forgotten): two copies exchanged by the action, glued at the basepoint, or
    ``a x a`` with the coordinates exchanged.
    """
    if kind in ("wedge", "product"):
        if b is None:
            raise ContractError(f"{kind} needs two operands")
        return wedge(a, b) if kind == "wedge" else product(a, b)
    if kind in ("additive_induction", "multiplicative_induction"):
        if b is not None:
            raise ContractError(f"{kind} takes a single operand")
        if a.basepoint is None:
            raise ContractError(f"{kind} needs a based operand")
        plain = forget_action(a)
        if kind == "additive_induction":
            return wedge(plain, plain, swap=True)
        return product(plain, plain, swap=True)
    raise ContractError(f"unknown combination kind {kind!r}")


def subobject(k: C2SimplicialSet, keep: Callable[[int, int], bool], trivial_action: bool = False) -> C2SimplicialSet:
    """Sub-simplicial set on the nondegenerate simplices satisfying ``keep``.

    ``keep`` must be closed under faces, and under the involution unless
    ``trivial_action`` replaces the action by the identity.
    """
    new_index = []
    for m in range(k.top_degree + 1):
        kept = [x for x in range(len(k.labels[m])) if keep(m, x)]
        new_index.append({x: j for j, x in enumerate(kept)})
    labels, faces, inv = [], [], []
    for m in range(k.top_degree + 1):
        idx = new_index[m]
        labels.append([k.labels[m][x] for x in idx])
        if m == 0:
            faces.append([() for _ in idx])
        else:
            faces.append([tuple((eta, new_index[eta[-1]][y]) for eta, y in k.faces[m][x]) for x in idx])
        inv.append(list(range(len(idx))) if trivial_action else [idx[k.involution[m][x]] for x in idx])
    while len(labels) > 1 and not labels[-1] and not k.truncated:
        labels.pop(), faces.pop(), inv.pop()
    bp = new_index[0].get(k.basepoint) if k.basepoint is not None else None
    return C2SimplicialSet(labels, faces, inv, bp, k.fixed_faithful, k.truncated)


def fixed_subobject(k: C2SimplicialSet | C2Complex):
    """Subobject of simplices fixed by the involution, with the action dropped."""
    if isinstance(k, C2Complex):
        from .complexes import fixed_subcomplex
        return fixed_subcomplex(k)
    if not k.fixed_faithful:
        raise NotFixedFaithful("degreewise fixed simplices are not certified to model the fixed-point set")
    return subobject(k, lambda m, x: k.involution[m][x] == x, trivial_action=True)


def point() -> C2SimplicialSet:
    return C2SimplicialSet([["*"]], [[()]], [[0]], basepoint=0)


def sp(k: C2SimplicialSet, n: int, max_degree: int | None = None, truncate: bool = False) -> C2SimplicialSet:
    """``n``-th symmetric product: degreewise multisets of ``n`` simplices.

    A multiset is degenerate iff all members are degenerate along a common
    index.  Simplices above ``max_degree`` are not generated; a value below
    ``n * dim`` needs ``truncate=True`` and marks the result truncated.
    """
    if k.basepoint is None:
        raise ContractError("symmetric products need a based simplicial set")
    _require_complete(k)
    if n < 0:
        raise ContractError("n must be non-negative")
    full = n * max(k.dim, 0)
    if max_degree is None:
        max_degree = full
    truncated = max_degree < full
    if truncated and not truncate:
        raise ContractError(f"max_degree {max_degree} < {full} would truncate; pass truncate=True")
    top = min(max_degree, full)
    bld = _Builder(top)
    if n == 0:
        bld.add(0, ())
    for m in range(top + 1 if n else 0):
        all_m = k.degenerate_simplices(m)
        masks = [collapse_mask(s[0]) for s in all_m]
        full_mask = (1 << m) - 1
        for combo in itertools.combinations_with_replacement(range(len(all_m)), n):
            acc = full_mask
            for c in combo:
                acc &= masks[c]
            if not acc:
                bld.add(m, tuple(sorted(all_m[c] for c in combo)))

    def canon(members):
        mu, red = normalize(members)
        return mu, tuple(sorted(red))

    def face_of(key, i, m):
        return canon([k.face(s, i) for s in key])

    def sigma_of(key, m):
        return tuple(sorted(k.sigma(s) for s in key))

    def label(key, m):
        return "{" + ",".join(simplex_label(k, s) for s in key) + "}"

    bp = bld.index[0][tuple(((0,), k.basepoint) for _ in range(n))]
    return bld.finish(label, face_of, sigma_of, bp, fixed_faithful=False, truncated=truncated)


def sp_inclusion(k: C2SimplicialSet, n: int, source: C2SimplicialSet | None = None,
                 target: C2SimplicialSet | None = None) -> SimplicialMap:
    """The map ``sp(k, n) -> sp(k, n + 1)`` adding one basepoint coordinate."""
    source = source if source is not None else sp(k, n)
    target = target if target is not None else sp(k, n + 1)
    images = []
    for m in range(source.top_degree + 1):
        idx = target.keyed_index(m)
        pad = ((0,) * (m + 1), k.basepoint)
        row = []
        for key in source.keys[m]:
            row.append((identity(m), idx[tuple(sorted(key + (pad,)))]))
        images.append(row)
    return SimplicialMap(source, target, images)
