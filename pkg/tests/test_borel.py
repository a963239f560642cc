import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c2max.borel import (INF, Bar, barcode, barcode_from_json, barcode_to_json, borel_module, degenerates_at_e2,
                         e2_page, forgetful_ranks, spectral_pages, torsion_order)
from c2max.complexes import ContractError
from c2max.maximality import budgets
from c2max.simplicial import sp
from conftest import CORPUS, space
from generators import random_regular_complex
from oracles import oracle_quotient_betti

I = INF
# Frozen from the reduced route; cross-checked against the raw route below.
GOLDEN_BARS = {
    "sphere(0,0)": [(0, I), (0, I)],
    "sphere(1,0)": [(0, I), (1, I)],
    "sphere(1,1)": [(0, I), (1, I)],
    "sphere(2,0)": [(0, I), (2, I)],
    "sphere(2,1)": [(0, I), (2, I)],
    "sphere(2,2)": [(0, I), (2, I)],
    "antipodal(1)": [(0, 2)],
    "antipodal(2)": [(0, 3)],
    "sd(sphere(1,1))": [(0, I), (1, I)],
    "sd(antipodal(1))": [(0, 2)],
    "lind(circle)": [(0, I), (1, 1)],
    "lind(s2)": [(0, I), (2, 1)],
    "nind(circle)": [(0, I), (1, 1), (2, I)],
    "wedge(lind(circle),sphere(1,1))": [(0, I), (1, 1), (1, I)],
    "prod(sphere(1,1),sphere(1,0))": [(0, I), (1, I), (1, I), (2, I)],
    "wedge(sphere(1,1),sphere(2,2))": [(0, I), (1, I), (2, I)],
    "prod(sphere(1,0),antipodal(1))": [(0, 2), (1, 2)],
}


def as_pairs(bars):
    return [(b.birth, b.length) for b in bars]


@pytest.mark.parametrize("expr", CORPUS)
def test_golden_barcodes(expr):
    assert as_pairs(barcode(borel_module(space(expr)))) == GOLDEN_BARS[expr]


@pytest.mark.parametrize("expr", CORPUS)
def test_raw_route_agrees(expr):
    k = space(expr)
    raw, red = borel_module(k, reduce=False), borel_module(k)
    assert raw.dims == red.dims
    assert barcode(raw) == barcode(red)


@pytest.mark.parametrize("expr", ["sphere(1,1)", "lind(circle)", "antipodal(2)"])
@pytest.mark.parametrize("extra", [1, 3])
def test_barcode_independent_of_window(expr, extra):
    k = space(expr)
    wide = borel_module(k, k.dim + 2 + extra)
    assert barcode(wide) == barcode(borel_module(k))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_free_action_borel_is_quotient(seed):
    k = random_regular_complex(random.Random(seed), 10, 8, free=True)
    m = borel_module(k)
    expect = oracle_quotient_betti(k, 2)
    assert list(m.dims[:len(expect)]) == expect
    assert all(d == 0 for d in m.dims[k.dim + 1:])
    assert all(not b.infinite for b in barcode(m))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_localization_in_high_degrees(seed):
    k = random_regular_complex(random.Random(seed), 10, 8)
    m = borel_module(k)
    assert m.dims[-1] == budgets(k).fixed_sum
    assert sum(b.infinite for b in barcode(m)) == budgets(k).fixed_sum


def test_barcode_json_round_trip():
    bars = (Bar(0, INF), Bar(1, 2))
    doc = barcode_to_json(bars)
    assert doc == [{"birth": 0, "length": "inf"}, {"birth": 1, "length": 2}]
    assert barcode_from_json(doc) == bars


def test_window_and_truncation_contracts():
    k = space("sphere(2,1)")
    with pytest.raises(ContractError):
        borel_module(k, 3)
    t = sp(k, 2, max_degree=3, truncate=True)
    with pytest.raises(ContractError):
        borel_module(t)


def test_e2_rows():
    assert e2_page(space("lind(circle)")) == [(1, 1), (1, 0)]
    assert e2_page(space("sphere(2,1)")) == [(1, 1), (0, 0), (1, 1)]


@pytest.mark.parametrize("expr,result", [("antipodal(1)", (False, 1)), ("antipodal(2)", (False, 2)),
                                         ("nind(circle)", (True, None)), ("sphere(1,1)", (True, None))])
def test_degeneration(expr, result):
    assert degenerates_at_e2(space(expr)) == result


@pytest.mark.parametrize("expr,first", [("antipodal(1)", 2), ("antipodal(2)", 3), ("lind(circle)", None),
                                        ("sphere(2,1)", None), ("prod(sphere(1,0),antipodal(1))", 2)])
def test_first_differential(expr, first):
    assert spectral_pages(space(expr), 4).first_nonzero_differential() == first


def test_pages_converge_to_borel_dims():
    k = space("antipodal(2)")
    pages = spectral_pages(k, 4)
    m = borel_module(k)
    last = pages.pages[max(pages.pages)]
    for n in range(k.dim + 1):
        assert sum(d for (p, q), d in last.items() if p + q == n) == m.dims[n]


def test_pages_raw_route_agrees():
    k = space("antipodal(1)")
    assert spectral_pages(k, 3).to_csv() == spectral_pages(k, 3, reduce=False).to_csv()


@pytest.mark.parametrize("expr", CORPUS)
def test_torsion_order_matches_bars(expr):
    bars = barcode(borel_module(space(expr)))
    finite = [b.length for b in bars if not b.infinite]
    assert torsion_order(bars) == (max(finite) if finite else 0)


@pytest.mark.parametrize("expr,onto", [("sphere(2,1)", True), ("lind(circle)", False), ("antipodal(1)", False)])
def test_forgetful_ranks(expr, onto):
    from c2max.cohomology import betti
    k = space(expr)
    assert (forgetful_ranks(k) == betti(k)) is onto
    assert forgetful_ranks(k) == forgetful_ranks(k, reduce=False)


@pytest.mark.parametrize("expr", CORPUS)
def test_pages_agree_with_group_cohomology_and_degeneration(expr):
    k = space(expr)
    pages = spectral_pages(k, 4)
    rows = e2_page(k)
    for (p, q), d in pages.pages[2].items():
        assert d == (rows[q][0] if p == 0 else rows[q][1])
    assert (pages.first_nonzero_differential() is None) == degenerates_at_e2(k)[0]


@pytest.mark.parametrize("expr,dims", [("point", (1, 1, 1, 1, 1)), ("sphere(1,1)", (1, 2, 2, 2, 2)),
                                       ("antipodal(1)", (1, 1, 0, 0, 0))])
def test_borel_dims_with_window_four(expr, dims):
    assert borel_module(space(expr), 4).dims == dims


@pytest.mark.parametrize("expr", ["sphere(1,1)", "lind(circle)", "antipodal(2)"])
def test_double_complex_squares_to_zero(expr):
    from c2max.borel import BorelComplex
    from c2max.cohomology import cochains
    assert BorelComplex(cochains(space(expr)), 5).as_cochain_complex().check()


def test_e2_rows_small_cases():
    assert e2_page(space("point")) == [(1, 1)]
    assert e2_page(space("antipodal(1)")) == [(1, 1), (1, 1)]


@pytest.mark.parametrize("expr", ["antipodal(1)", "antipodal(2)", "prod(sphere(1,0),antipodal(1))", "nind(circle)"])
def test_page_dims_weakly_decrease(expr):
    pages = spectral_pages(space(expr), 4).pages
    for r in range(2, 4):
        for pq, d in pages[r + 1].items():
            assert d <= pages[r][pq]


@pytest.mark.parametrize("expr", CORPUS)
def test_e2_antidiagonals_dominate(expr):
    from c2max.borel import e2_total
    k = space(expr)
    rows, m = e2_page(k), borel_module(k)
    gaps = [e2_total(rows, n) - m.dims[n] for n in range(k.dim + 2)]
    assert min(gaps) >= 0
    assert (max(gaps) > 0) != degenerates_at_e2(k, m)[0]
