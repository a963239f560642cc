"""Finite simplicial complexes carrying a vertex involution."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping


class ContractError(ValueError):
    """A precondition of an operation was violated by the caller."""


class NotFixedFaithful(ContractError):
    """The object cannot certify that its degreewise fixed part models the fixed set."""


@dataclass(frozen=True)
class ValidationReport:
    face_closed: bool
    involution_ok: bool
    regular: bool
    basepoint_fixed: bool
    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.face_closed and self.involution_ok and self.basepoint_fixed


@dataclass(frozen=True, eq=False)
class C2Complex:
    """Abstract simplicial complex with an involution on its vertices.

    ``vertices`` fixes an order (used when converting to a simplicial set);
    ``simplices`` holds every simplex, vertices included, as frozensets.
    """

    vertices: tuple
    simplices: frozenset
    involution: Mapping
    basepoint: Hashable | None = None
    _report: ValidationReport = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inv = {v: self.involution.get(v, v) for v in self.vertices}
        object.__setattr__(self, "involution", inv)
        object.__setattr__(self, "_report", validate(self))

    @classmethod
    def from_facets(cls, vertices: Iterable, facets: Iterable[Iterable], involution=None,
                    basepoint=None) -> "C2Complex":
        simplices = set()
        for f in facets:
            f = tuple(f)
            for k in range(1, len(f) + 1):
                simplices.update(frozenset(c) for c in itertools.combinations(f, k))
        verts = tuple(vertices)
        simplices.update(frozenset([v]) for v in verts)
        return cls(verts, frozenset(simplices), dict(involution or {}), basepoint)

    @property
    def regular(self) -> bool:
        return self._report.regular

    @property
    def report(self) -> ValidationReport:
        return self._report

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def sigma(self, simplex: frozenset) -> frozenset:
        return frozenset(self.involution[v] for v in simplex)

    def by_dimension(self) -> list[list[tuple]]:
        """Simplices as vertex tuples sorted by the vertex order, grouped by dimension."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        out: list[list[tuple]] = [[] for _ in range(self.dim + 1)]
        for s in self.simplices:
            out[len(s) - 1].append(tuple(sorted(s, key=pos.__getitem__)))
        for group in out:
            group.sort(key=lambda t: [pos[v] for v in t])
        return out

    def fixed_vertices(self) -> list:
        return [v for v in self.vertices if self.involution[v] == v]

    def to_json(self) -> str:
        pos = {v: i for i, v in enumerate(self.vertices)}
        simplices = sorted((sorted(s, key=pos.__getitem__) for s in self.simplices),
                           key=lambda t: (len(t), [pos[v] for v in t]))
        # only moved vertices, in vertex order
        inv = {str(v): str(self.involution[v]) for v in self.vertices if self.involution[v] != v}
        doc = {"vertices": [str(v) for v in self.vertices],
               "simplices": [[str(v) for v in s] for s in simplices],
               "involution": inv}
        if self.basepoint is not None:
            doc["basepoint"] = str(self.basepoint)
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str | Mapping) -> "C2Complex":
        doc = json.loads(text) if isinstance(text, str) else text
        verts = tuple(doc["vertices"])
        simplices = frozenset(frozenset(s) for s in doc["simplices"]) | frozenset(frozenset([v]) for v in verts)
        return cls(verts, simplices, dict(doc.get("involution", {})), doc.get("basepoint"))


def validate(k: C2Complex) -> ValidationReport:
    problems = []
    vertex_set = set(k.vertices)
    face_closed = all(frozenset([v]) in k.simplices for v in k.vertices)
    for s in k.simplices:
        if not s or not s <= vertex_set:
            face_closed = False
            problems.append(f"simplex {sorted(map(str, s))} uses unknown vertices")
            continue
        if len(s) > 1:
            for v in s:
                if s - {v} not in k.simplices:
                    face_closed = False
                    problems.append(f"face of {sorted(map(str, s))} missing")
                    break
    inv = k.involution
    involution_ok = all(w in vertex_set for w in inv.values()) and all(inv[inv[v]] == v for v in k.vertices)
    if involution_ok:
        for s in k.simplices:
            if frozenset(inv[v] for v in s) not in k.simplices:
                involution_ok = False
                problems.append(f"image of {sorted(map(str, s))} is not a simplex")
                break
    else:
        problems.append("vertex map is not an involution")
    regular = True
    if involution_ok:
        for s in k.simplices:
            if len(s) > 1 and frozenset(inv[v] for v in s) == s and any(inv[v] != v for v in s):
                regular = False
                problems.append(f"invariant simplex {sorted(map(str, s))} is not fixed")
                break
    basepoint_fixed = k.basepoint is None or (k.basepoint in vertex_set and inv.get(k.basepoint) == k.basepoint)
    if not basepoint_fixed:
        problems.append("basepoint is not a fixed vertex")
    return ValidationReport(face_closed, involution_ok, regular, basepoint_fixed, tuple(problems))


def barycentric_subdivide(k: C2Complex) -> C2Complex:
    """Vertices are the simplices of ``k``; simplices are chains under inclusion.

    New vertices are ordered by (dimension, position of the orbit
    representative), so the induced involution preserves the order on every
    flag.
    """
    pos = {v: i for i, v in enumerate(k.vertices)}

    def key(s):
        return (len(s), sorted(pos[v] for v in s))

    def orbit_key(s):
        t = k.sigma(s)
        a, b = key(s), key(t)
        return (len(s), min(a, b), a)

    def label(s):
        return "{" + ",".join(str(v) for v in sorted(s, key=pos.__getitem__)) + "}"

    ordered = sorted(k.simplices, key=orbit_key)
    name = {s: label(s) for s in ordered}
    verts = tuple(name[s] for s in ordered)
    by_dim: dict[int, list[frozenset]] = {}
    for s in ordered:
        by_dim.setdefault(len(s), []).append(s)
    # maximal chains suffice; the constructor closes under faces
    facets = []
    top = [s for s in ordered if not any(s < t for t in by_dim.get(len(s) + 1, ()))]

    def chains(s):
        if len(s) == 1:
            return [[s]]
        out = []
        for v in sorted(s, key=pos.__getitem__):
            for c in chains(s - {v}):
                out.append(c + [s])
        return out

    for s in top:
        for c in chains(s):
            facets.append([name[t] for t in c])
    inv = {name[s]: name[k.sigma(s)] for s in ordered}
    bp = name[frozenset([k.basepoint])] if k.basepoint is not None else None
    return C2Complex.from_facets(verts, facets, inv, bp)


def _cross_polytope(n: int, negated: int, basepoint: bool) -> C2Complex:
    # vertices ±e_i, i = 1..n+1; pairs are adjacent so antipodes never share a simplex
    verts = []
    for i in range(1, n + 2):
        verts += [f"+{i}", f"-{i}"]
    inv = {}
    for i in range(1, negated + 1):
        inv[f"+{i}"] = f"-{i}"
        inv[f"-{i}"] = f"+{i}"
    facets = [[f"{s}{i + 1}" for i, s in enumerate(signs)]
              for signs in itertools.product("+-", repeat=n + 1)]
    return C2Complex.from_facets(verts, facets, inv, f"+{n + 1}" if basepoint else None)


def rep_sphere(p: int, q: int) -> C2Complex:
    """Representation sphere with ``q`` of its ``p+1`` ambient coordinates negated."""
    if not 0 <= q <= p:
        raise ContractError(f"rep_sphere needs p >= q >= 0, got p={p}, q={q}")
    return _cross_polytope(p, q, basepoint=True)


def antipodal_sphere(n: int) -> C2Complex:
    if n < 0:
        raise ContractError("antipodal_sphere needs n >= 0")
    return _cross_polytope(n, n + 1, basepoint=False)


def fixed_subcomplex(k: C2Complex) -> C2Complex:
    if not k.regular:
        raise NotFixedFaithful("complex is not regular: an invariant simplex is not fixed vertex-wise")
    fixed = {v for v in k.vertices if k.involution[v] == v}
    simplices = frozenset(s for s in k.simplices if s <= fixed)
    verts = tuple(v for v in k.vertices if v in fixed)
    return C2Complex(verts, simplices, {}, k.basepoint)


def order_compatible(k: C2Complex) -> bool:
    """True iff no simplex contains a swapped vertex pair.

    Exactly then an order listing each orbit as a consecutive block makes the
    involution monotone on every simplex; a simplex holding {v, σv} can never
    be ordered compatibly because σ reverses that pair.
    """
    inv = k.involution
    return not any(inv[v] != v and inv[v] in s for s in k.simplices for v in s)


def orbit_order(k: C2Complex) -> tuple:
    seen = set()
    out = []
    for v in k.vertices:
        if v in seen:
            continue
        w = k.involution[v]
        out.append(v)
        seen.add(v)
        if w != v:
            out.append(w)
            seen.add(w)
    return tuple(out)
