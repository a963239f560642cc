"""Decide Maximal / Galois-Maximal / neither by three independent routes."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import borel as _borel
from .cohomology import _as_sset, betti, cohomology_with_action, group_cohomology_dim
from .complexes import ContractError, NotFixedFaithful
from .simplicial import C2SimplicialSet, fixed_subobject


class Verdict(str, enum.Enum):
    MAXIMAL = "Maximal"
    GALOIS_MAXIMAL_ONLY = "GaloisMaximalOnly"
    NEITHER = "Neither"

    @property
    def galois_maximal(self) -> bool:
        return self is not Verdict.NEITHER


class RouteDisagreement(RuntimeError):
    """Two classification routes returned different verdicts."""


ROUTES = ("definition", "borel", "degeneration")


@dataclass(frozen=True)
class Budgets:
    fixed_sum: int
    hk_sum: int
    st_sum: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.fixed_sum, self.hk_sum, self.st_sum)


@dataclass
class ClassificationReport:
    verdict: Verdict
    budgets: Budgets | None
    barcode: tuple
    degeneration: tuple[bool, int | None]
    trivial_action: bool
    routes_used: tuple[str, ...]
    agreement: bool
    route_verdicts: dict[str, Verdict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "budgets": None if self.budgets is None else dict(zip(("fixed_sum", "hk_sum", "st_sum"),
                                                                   self.budgets.as_tuple())),
            "barcode": _borel.barcode_to_json(self.barcode),
            "degeneration": {"degenerates": self.degeneration[0], "witness": self.degeneration[1]},
            "trivial_action": self.trivial_action,
            "routes_used": list(self.routes_used),
            "route_verdicts": {k: v.value for k, v in self.route_verdicts.items()},
            "agreement": self.agreement,
        }


def budgets(k) -> Budgets:
    """Total Betti numbers of the fixed set and of the space, and the group-cohomology sum between them."""
    k = _as_sset(k)
    if not k.fixed_faithful:
        raise NotFixedFaithful("budgets need a trusted fixed subobject")
    fixed = fixed_subobject(k)
    mod = cohomology_with_action(k)
    return Budgets(sum(betti(fixed)) if fixed.labels[0] else 0,
                   sum(group_cohomology_dim(s, 1) for s in mod.sigma),
                   sum(mod.dims))


def has_fixed_vertex(k: C2SimplicialSet) -> bool:
    return any(t == j for j, t in enumerate(k.involution[0]))


def _by_definition(b: Budgets) -> Verdict:
    if b.fixed_sum == 0:
        return Verdict.NEITHER
    if b.fixed_sum == b.st_sum:
        return Verdict.MAXIMAL
    if b.fixed_sum == b.hk_sum:
        return Verdict.GALOIS_MAXIMAL_ONLY
    return Verdict.NEITHER


def _by_barcode(k: C2SimplicialSet, bars) -> Verdict:
    if not has_fixed_vertex(k):
        return Verdict.NEITHER
    if all(b.infinite for b in bars):
        return Verdict.MAXIMAL
    if all(b.infinite or b.length == 1 for b in bars):
        return Verdict.GALOIS_MAXIMAL_ONLY
    return Verdict.NEITHER


def _by_degeneration(k: C2SimplicialSet, degenerates: bool, trivial: bool) -> Verdict:
    if not has_fixed_vertex(k) or not degenerates:
        return Verdict.NEITHER
    return Verdict.MAXIMAL if trivial else Verdict.GALOIS_MAXIMAL_ONLY


def classify(k, method: str = "all", n_max: int | None = None) -> ClassificationReport:
    """Classify ``k``; with ``method='all'`` every applicable route runs and must agree.

    The definition route needs a fixed-faithful model and is skipped under
    'all' when the model is not; asking for it explicitly then raises.
    """
    if method not in ROUTES + ("all",):
        raise ContractError(f"unknown method {method!r}")
    k = _as_sset(k)
    if k.truncated:
        raise ContractError("cannot classify a truncated model")
    wanted = ROUTES if method == "all" else (method,)
    if method == "definition" and not k.fixed_faithful:
        raise NotFixedFaithful("definition route needs a fixed-faithful model")

    b = budgets(k) if k.fixed_faithful else None
    module = _borel.borel_module(k, n_max)
    bars = _borel.barcode(module)
    deg = _borel.degenerates_at_e2(k, module)
    trivial = cohomology_with_action(k).trivial_action

    verdicts: dict[str, Verdict] = {}
    for route in wanted:
        if route == "definition":
            if b is not None:
                verdicts[route] = _by_definition(b)
        elif route == "borel":
            verdicts[route] = _by_barcode(k, bars)
        else:
            verdicts[route] = _by_degeneration(k, deg[0], trivial)
    distinct = set(verdicts.values())
    if len(distinct) > 1:
        detail = ", ".join(f"{r}={v.value}" for r, v in verdicts.items())
        raise RouteDisagreement(f"classification routes disagree: {detail}")
    verdict = distinct.pop()
    if verdict is Verdict.MAXIMAL and not trivial:
        raise RouteDisagreement("Maximal verdict with a nontrivial action on cohomology")
    return ClassificationReport(verdict, b, bars, deg, trivial, tuple(verdicts), True, verdicts)


def forgetful_surjective(k) -> bool:
    """Whether restriction from Borel cohomology to ordinary cohomology is onto in every degree."""
    k = _as_sset(k)
    module_ranks = _borel.forgetful_ranks(k)
    return module_ranks == betti(k)
