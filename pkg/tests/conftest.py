import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from c2max.expr import as_sset, evaluate  # noqa: E402

# Regular, fixed-faithful spaces used across the suite.
CORPUS = [
    "sphere(0,0)", "sphere(1,0)", "sphere(1,1)", "sphere(2,0)", "sphere(2,1)", "sphere(2,2)",
    "antipodal(1)", "antipodal(2)", "sd(sphere(1,1))", "sd(antipodal(1))",
    "lind(circle)", "lind(s2)", "nind(circle)", "wedge(lind(circle),sphere(1,1))",
    "prod(sphere(1,1),sphere(1,0))", "wedge(sphere(1,1),sphere(2,2))", "prod(sphere(1,0),antipodal(1))",
]

_CACHE: dict = {}


def space(expr: str):
    """Simplicial-set model of an expression, built once per session."""
    if expr not in _CACHE:
        _CACHE[expr] = as_sset(evaluate(expr))
    return _CACHE[expr]


@pytest.fixture(params=CORPUS)
def corpus_space(request):
    return request.param, space(request.param)
