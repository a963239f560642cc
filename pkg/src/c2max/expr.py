"""A small expression language for building C2-spaces.

    expr := sphere(p,q) | antipodal(n) | point | circle | s2
          | wedge(expr,expr) | prod(expr,expr) | lind(expr) | nind(expr)
          | sd(expr) | sp(n,expr) | load("file.json")
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .complexes import C2Complex, ContractError, antipodal_sphere, barycentric_subdivide, rep_sphere
from .simplicial import C2SimplicialSet, combine, sp, to_simplicial_set

Space = Union[C2Complex, C2SimplicialSet]


class ParseError(ContractError):
    def __init__(self, message: str, position: int):
        super().__init__(f"parse error at position {position}: {message}")
        self.position = position


@dataclass(frozen=True)
class Node:
    name: str
    args: tuple
    position: int


_TOKEN = re.compile(r'\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<str>"[^"]*")|(?P<punct>[(),]))')

_ARITY = {
    "sphere": ("int", "int"), "antipodal": ("int",), "point": (), "circle": (), "s2": (),
    "wedge": ("expr", "expr"), "prod": ("expr", "expr"), "lind": ("expr",), "nind": ("expr",),
    "sd": ("expr",), "sp": ("int", "expr"), "load": ("str",),
}


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse(text: str) -> Node:
    toks = _tokens(text)
    i = 0

    def expect(kind, value=None):
        nonlocal i
        k, v, p = toks[i]
        if k != kind or (value is not None and v != value):
            want = value or kind
            got = v or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", p)
        i += 1
        return v, p

    def expr() -> Node:
        name, p = expect("name")
        if name not in _ARITY:
            raise ParseError(f"unknown constructor {name!r}", p)
        kinds = _ARITY[name]
        args = []
        if kinds:
            expect("punct", "(")
            for j, kind in enumerate(kinds):
                if j:
                    expect("punct", ",")
                if kind == "expr":
                    args.append(expr())
                elif kind == "int":
                    args.append(int(expect("num")[0]))
                else:
                    args.append(expect("str")[0][1:-1])
            expect("punct", ")")
        return Node(name, tuple(args), p)

    node = expr()
    if toks[i][0] != "end":
        raise ParseError(f"trailing input {toks[i][1]!r}", toks[i][2])
    return node


def circle() -> C2Complex:
    return C2Complex.from_facets(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]], basepoint="a")


def sphere2() -> C2Complex:
    v = ["a", "b", "c", "d"]
    return C2Complex.from_facets(v, [["a", "b", "c"], ["a", "b", "d"], ["a", "c", "d"], ["b", "c", "d"]],
                                 basepoint="a")


def point_complex() -> C2Complex:
    return C2Complex.from_facets(["*"], [["*"]], basepoint="*")


def load(path: str) -> Space:
    doc = json.loads(Path(path).read_text())
    if "faces" in doc:
        return C2SimplicialSet.from_dict(doc)
    return C2Complex.from_json(doc)


def as_sset(x: Space) -> C2SimplicialSet:
    return to_simplicial_set(x) if isinstance(x, C2Complex) else x


def evaluate(node: Node | str, sp_degree: int | None = None) -> Space:
    """Build the space; ``sp_degree`` caps the degree of every symmetric product (truncating)."""
    if isinstance(node, str):
        node = parse(node)
    name, args = node.name, node.args
    try:
        if name == "sphere":
            return rep_sphere(*args)
        if name == "antipodal":
            return antipodal_sphere(*args)
        if name == "point":
            return point_complex()
        if name == "circle":
            return circle()
        if name == "s2":
            return sphere2()
        if name == "load":
            return load(args[0])
        if name == "sd":
            inner = evaluate(args[0], sp_degree)
            if not isinstance(inner, C2Complex):
                raise ContractError("sd needs a simplicial complex operand")
            return barycentric_subdivide(inner)
        if name in ("wedge", "prod"):
            a, b = (as_sset(evaluate(e, sp_degree)) for e in args)
            return combine("wedge" if name == "wedge" else "product", a, b)
        if name in ("lind", "nind"):
            a = as_sset(evaluate(args[0], sp_degree))
            return combine("additive_induction" if name == "lind" else "multiplicative_induction", a)
        if name == "sp":
            n, inner = args
            a = as_sset(evaluate(inner, sp_degree))
            if sp_degree is not None and sp_degree < n * max(a.dim, 0):
                return sp(a, n, sp_degree, truncate=True)
            return sp(a, n)
    except ContractError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ContractError(f"{name} at position {node.position}: {exc}") from exc
    raise ParseError(f"unknown constructor {name!r}", node.position)
