import json

import pytest

from c2max.cohomology import betti, cohomology_with_action, equivariant_decomposition
from c2max.complexes import ContractError
from c2max.maximality import Verdict
from c2max.simplicial import combine, product, sp, subobject
from c2max.symprod import splitting_check, stability_check, tower, verify_main_theorem
from conftest import space


def _moved(key, bp):
    return sum(1 for eta, z in key if not (z == bp and eta[-1] == 0))


def union_of_products(k, n):
    """Pairs (a, b) in sp(k, n) x sp(k, n) with at most n non-basepoint members between them, swapped."""
    s = sp(k, n)
    p = product(s, s, swap=True)

    def keep(m, x):
        (ea, xa), (eb, xb) = p.keys[m][x]
        return _moved(s.keys[ea[-1]][xa], k.basepoint) + _moved(s.keys[eb[-1]][xb], k.basepoint) <= n

    return subobject(p, keep)


def test_symmetric_product_of_induction_matches_union_model():
    k = space("circle")
    lhs = sp(combine("additive_induction", k), 2)
    rhs = union_of_products(k, 2)
    assert rhs.check() == []
    assert betti(lhs, 2) == betti(rhs, 2)
    dec = lambda x: [equivariant_decomposition(s) for s in cohomology_with_action(x, 2).sigma]
    assert dec(lhs) == dec(rhs)


def test_tower_is_memoized():
    k = space("sphere(1,1)")
    assert tower(k, 2) is tower(k, 2)
    with pytest.raises(ContractError):
        tower(space("antipodal(1)"), 2)


@pytest.mark.parametrize("expr", ["circle", "sphere(1,1)", "lind(circle)"])
def test_stability_low_levels(expr):
    rep = stability_check(space(expr), 2)
    assert rep.ok and rep.level(1).stable_range_ok and rep.level(1).failures == []


@pytest.mark.parametrize("expr", ["sphere(1,1)", "sphere(2,1)", "nind(circle)"])
def test_splitting_low_levels(expr):
    assert splitting_check(space(expr), 2).level(1).split_ok


def test_verify_main_refuses_non_galois_maximal_base():
    k = space("prod(sphere(1,0),antipodal(1))")
    with pytest.raises(ContractError, match="budgets"):
        verify_main_theorem(k, 2)


def test_verify_main_with_tower_checks():
    rep = verify_main_theorem(space("lind(circle)"), 2, tower_checks=True)
    assert rep.base_verdict is Verdict.GALOIS_MAXIMAL_ONLY
    assert [lv.verdict for lv in rep.levels] == [Verdict.GALOIS_MAXIMAL_ONLY] * 2
    assert rep.level(1).stable_range_ok and rep.level(1).split_ok
    assert rep.level(2).betti == [1, 2, 1]  # homotopy equivalent to the torus
    doc = rep.to_dict()
    assert "seconds" not in json.dumps(doc)
    assert "seconds" in json.dumps(rep.to_dict(timings=True))
    table = rep.table().splitlines()
    assert table[0].split() == ["level", "verdict", "barcode", "stable?", "split?"]
    assert table[1].split()[:2] == ["1", "GaloisMaximalOnly"]
