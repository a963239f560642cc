"""Acceptance criteria; each test prints one PASS/FAIL line."""

import random
import time

import numpy as np
import pytest

from c2max.borel import barcode, borel_module, degenerates_at_e2, spectral_pages, torsion_order
from c2max.cohomology import GradedC2Module, ModuleMap, betti, equivariant_section_exists
from c2max.f2 import F2Matrix, kernel_basis, rank
from c2max.maximality import Verdict, classify
from c2max.simplicial import sp
from c2max.symprod import splitting_check, stability_check, verify_main_theorem
from conftest import CORPUS, space
from generators import random_regular_complex
from oracles import naive_rank, oracle_betti

M, G, N = Verdict.MAXIMAL, Verdict.GALOIS_MAXIMAL_ONLY, Verdict.NEITHER


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail
    return emit


def test_criterion_1_golden_classifications(report):
    t0 = time.perf_counter()
    expected = {f"sphere({p},{q})": M for p in range(3) for q in range(p + 1)}
    expected.update({"lind(circle)": G, "lind(s2)": G, "nind(circle)": G, "antipodal(1)": N, "antipodal(2)": N})
    got = {e: classify(space(e), "all").verdict for e in expected}
    wrong = {e: v.value for e, v in got.items() if v is not expected[e]}
    dt = time.perf_counter() - t0
    report(1, "golden classifications", not wrong and dt < 10, f"{len(expected)} spaces, {dt:.2f}s, wrong={wrong}")


def test_criterion_2_route_agreement(report):
    assert len(CORPUS) >= 12
    bad = []
    for e in CORPUS:
        k = space(e)
        assert k.fixed_faithful and not k.truncated
        verdicts = {m: classify(k, m).verdict for m in ("definition", "borel", "degeneration")}
        if len(set(verdicts.values())) != 1 or classify(k, "all").verdict is not verdicts["borel"]:
            bad.append(e)
    report(2, "definition, borel and degeneration routes agree", not bad, f"{len(CORPUS)} spaces, disagree={bad}")


def test_criterion_3_harnack_krasnov_chain(report):
    bad = []
    for e in CORPUS:
        f, h, s = classify(space(e), "definition").budgets.as_tuple()
        if not f <= h <= s:
            bad.append((e, (f, h, s)))
    report(3, "fixed_sum <= hk_sum <= st_sum", not bad, f"{len(CORPUS)} spaces, violations={bad}")


def test_criterion_4_torsion_proposition(report):
    t0 = time.perf_counter()
    bad = []
    for e in CORPUS:
        k = space(e)
        m = borel_module(k)
        if not degenerates_at_e2(k, m)[0] and torsion_order(m) < 2:
            bad.append(e)
    witness = []
    for e, length in (("antipodal(1)", 2), ("antipodal(2)", 3)):
        k = space(e)
        bars = barcode(borel_module(k))
        first = spectral_pages(k, 4).first_nonzero_differential()
        witness.append(len(bars) == 1 and bars[0].length == length and first == length)
    dt = time.perf_counter() - t0
    ok = not bad and all(witness) and dt < 10
    report(4, "non-degeneration forces torsion of order >= 2", ok,
           f"violations={bad}, antipodal witnesses d2/d3={witness}, {dt:.2f}s")


def test_criterion_5_main_theorem(report):
    t0 = time.perf_counter()
    cases = [("wedge(lind(circle),sphere(1,1))", 2, G), ("nind(circle)", 2, G),
             ("sphere(1,1)", 3, M), ("sphere(2,1)", 3, M)]
    got = {}
    for e, n, v in cases:
        rep = verify_main_theorem(space(e), n)
        got[e] = [lv.verdict.value for lv in rep.levels]
        assert [lv.n for lv in rep.levels] == list(range(1, n + 1))
    ok_levels = all(got[e] == [v.value] * n for e, n, v in cases)
    dt = time.perf_counter() - t0
    report(5, "symmetric products keep (Galois-)Maximality", ok_levels and dt < 600, f"{got}, {dt:.1f}s")


def test_criterion_6_steenrod_stability(report):
    circle = stability_check(space("circle"), 3)
    s2 = stability_check(space("s2"), 3)
    b2, b3 = betti(sp(space("s2"), 2)), betti(sp(space("s2"), 3))
    ok = circle.ok and s2.ok and b2 == [1, 0, 1, 0, 1] and b3[:2] == b2[:2] and b3 == [1, 0, 1, 0, 1, 0, 1]
    report(6, "stability in the range q < n", ok, f"sp(s2,2)={b2}, sp(s2,3)={b3}")


def test_criterion_7_equivariant_splitting(report):
    levels = {e: [lv.split_ok for lv in splitting_check(space(e), 3).levels] for e in ("sphere(1,1)", "lind(circle)")}
    swap = F2Matrix.from_dense(np.array([[0, 1], [1, 0]]))
    aug = ModuleMap(GradedC2Module((2,), (swap,)), GradedC2Module((1,), (F2Matrix.identity(1),)),
                    (F2Matrix.from_dense(np.array([[1, 1]])),))
    negative = equivariant_section_exists(aug)
    ok = all(v == [True, True] for v in levels.values()) and negative is False
    report(7, "equivariant splitting of the tower", ok, f"{levels}, augmentation section exists={negative}")


def test_criterion_8_oracle_equivalence(report):
    rng = np.random.default_rng(20261018)
    mat_bad = 0
    for _ in range(50):
        r, c = int(rng.integers(1, 41)), int(rng.integers(1, 61))
        dense = (rng.random((r, c)) < rng.uniform(0.1, 0.9)).astype(int)
        m = F2Matrix.from_dense(dense)
        ker = kernel_basis(m)
        rows = dense.tolist()
        expect = naive_rank(rows)
        ker_ok = len(ker) == c - expect and all(m.apply(v) == 0 for v in ker)
        if rank(m) != expect or not ker_ok:
            mat_bad += 1
    prng = random.Random(20261018)
    betti_bad = []
    for i in range(5):
        k = random_regular_complex(prng, 12, 10)
        if betti(k, 2) != oracle_betti(k, 2):
            betti_bad.append(i)
    ok = mat_bad == 0 and not betti_bad
    report(8, "agreement with naive oracles", ok, f"50 matrices ({mat_bad} bad), 5 complexes (bad={betti_bad})")
