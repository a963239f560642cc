"""Stability and splitting of symmetric-product towers, and the main-theorem check."""

from __future__ import annotations

import time
import weakref
from dataclasses import dataclass, field

from .borel import barcode_to_json
from .cohomology import betti, equivariant_section, induced_map
from .complexes import ContractError
from .f2 import rank
from .maximality import RouteDisagreement, Verdict, classify
from .simplicial import C2SimplicialSet, sp, sp_inclusion

_TOWERS: "weakref.WeakKeyDictionary[C2SimplicialSet, dict[int, C2SimplicialSet]]" = weakref.WeakKeyDictionary()


def tower(k: C2SimplicialSet, n: int) -> C2SimplicialSet:
    """``sp(k, n)``, memoized per base object so inclusions see the same models."""
    if k.basepoint is None:
        raise ContractError("symmetric products need a based space")
    levels = _TOWERS.setdefault(k, {})
    if n not in levels:
        levels[n] = sp(k, n)
    return levels[n]


def inclusion(k: C2SimplicialSet, n: int):
    return sp_inclusion(k, n, tower(k, n), tower(k, n + 1))


@dataclass
class LevelReport:
    n: int
    verdict: Verdict | None = None
    barcode: tuple = ()
    trivial_action: bool | None = None
    betti: list[int] | None = None
    stable_range_ok: bool | None = None
    split_ok: bool | None = None
    failures: list[tuple[int, int]] = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self, timings: bool = False) -> dict:
        doc = {
            "n": self.n,
            "verdict": None if self.verdict is None else self.verdict.value,
            "barcode": barcode_to_json(self.barcode),
            "trivial_action": self.trivial_action,
            "betti": self.betti,
            "stable_range_ok": self.stable_range_ok,
            "split_ok": self.split_ok,
            "failures": [list(f) for f in self.failures],
        }
        if timings:
            doc["seconds"] = round(self.seconds, 3)
        return doc


@dataclass
class TowerReport:
    levels: list[LevelReport]
    base_verdict: Verdict | None = None

    def level(self, n: int) -> LevelReport:
        for lv in self.levels:
            if lv.n == n:
                return lv
        raise KeyError(n)

    @property
    def ok(self) -> bool:
        return all(lv.stable_range_ok is not False and lv.split_ok is not False for lv in self.levels)

    def to_dict(self, timings: bool = False) -> dict:
        return {"base_verdict": None if self.base_verdict is None else self.base_verdict.value,
                "levels": [lv.to_dict(timings) for lv in self.levels]}

    def table(self) -> str:
        rows = [("level", "verdict", "barcode", "stable?", "split?")]
        for lv in self.levels:
            bars = " ".join(f"({b['birth']},{b['length']})" for b in barcode_to_json(lv.barcode))
            rows.append((str(lv.n), lv.verdict.value if lv.verdict else "-", bars or "-",
                         _flag(lv.stable_range_ok), _flag(lv.split_ok)))
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows) + "\n"


def _flag(x: bool | None) -> str:
    return "-" if x is None else ("yes" if x else "NO")


def _level(report: dict[int, LevelReport], n: int) -> LevelReport:
    if n not in report:
        report[n] = LevelReport(n)
    return report[n]


def stability_check(k: C2SimplicialSet, n_max: int, into: dict | None = None) -> TowerReport:
    """Check that H^q(sp(k, n+1)) -> H^q(sp(k, n)) is an isomorphism for q < n, 1 <= n < n_max."""
    levels = into if into is not None else {}
    for n in range(1, n_max):
        t0 = time.perf_counter()
        lv = _level(levels, n)
        f = induced_map(inclusion(k, n), max_degree=n - 1)
        ok = True
        for q, m in enumerate(f.matrices):
            if not (m.nrows == m.ncols and m.nrows == rank(m)):
                ok = False
                lv.failures.append((n, q))
        lv.stable_range_ok = ok
        lv.seconds += time.perf_counter() - t0
    return TowerReport([levels[n] for n in sorted(levels)])


def splitting_check(k: C2SimplicialSet, n_max: int, into: dict | None = None) -> TowerReport:
    """Check that each restriction H(sp(k, n+1)) -> H(sp(k, n)) has an equivariant section."""
    levels = into if into is not None else {}
    for n in range(1, n_max):
        t0 = time.perf_counter()
        lv = _level(levels, n)
        lv.split_ok = equivariant_section(induced_map(inclusion(k, n))) is not None
        lv.seconds += time.perf_counter() - t0
    return TowerReport([levels[n] for n in sorted(levels)])


def verify_main_theorem(k: C2SimplicialSet, n_max: int, tower_checks: bool = False) -> TowerReport:
    """Classify sp(k, n) for n = 1..n_max by the Borel route (degeneration as a second opinion).

    ``k`` must be Galois-Maximal.  With ``tower_checks`` the stability and
    splitting predicates are evaluated between consecutive levels as well.
    """
    base = classify(k, "all" if k.fixed_faithful else "borel")
    if base.verdict is Verdict.NEITHER:
        shown = base.budgets.as_tuple() if base.budgets else "unavailable"
        raise ContractError(f"base space is not Galois-Maximal (budgets fixed/hk/st = {shown})")
    levels: dict[int, LevelReport] = {}
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        x = tower(k, n)
        rep = classify(x, "borel")
        second = classify(x, "degeneration")
        if second.verdict is not rep.verdict:
            raise RouteDisagreement(f"level {n}: borel={rep.verdict.value}, degeneration={second.verdict.value}")
        lv = _level(levels, n)
        lv.verdict = rep.verdict
        lv.barcode = rep.barcode
        lv.trivial_action = rep.trivial_action
        lv.betti = betti(x)
        lv.seconds += time.perf_counter() - t0
    if tower_checks:
        stability_check(k, n_max, levels)
        splitting_check(k, n_max, levels)
    return TowerReport([levels[n] for n in sorted(levels)], base.verdict)
