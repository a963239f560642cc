"""Command-line front end: ``c2max <command> "<expr>" [flags]``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import borel
from .cohomology import betti
from .complexes import ContractError
from .expr import as_sset, evaluate
from .maximality import budgets, classify
from .simplicial import fixed_subobject
from .symprod import splitting_check, stability_check, verify_main_theorem

COMMANDS = ("betti", "fixed", "classify", "barcode", "e2", "pages", "budgets",
            "verify-stability", "verify-splitting", "verify-main")

TRUNCATE_ENV = "C2MAX_TRUNCATE"


def _bars_text(bars) -> str:
    return " ".join(f"({b['birth']},{b['length']})" for b in borel.barcode_to_json(bars))


def _report_text(rep) -> str:
    lines = [f"verdict: {rep.verdict.value}"]
    if rep.budgets is not None:
        f, h, s = rep.budgets.as_tuple()
        lines.append(f"budgets: fixed={f} hk={h} st={s}")
    lines.append(f"barcode: {_bars_text(rep.barcode)}")
    ok, witness = rep.degeneration
    lines.append("E2 degeneration: " + ("yes" if ok else f"no (first mismatch in degree {witness})"))
    lines.append(f"trivial action on cohomology: {'yes' if rep.trivial_action else 'no'}")
    lines.append("routes: " + ", ".join(f"{r}={v.value}" for r, v in rep.route_verdicts.items()))
    return "\n".join(lines) + "\n"


def _run(args) -> tuple[int, str]:
    space = evaluate(args.expr, args.truncate)
    k = as_sset(space)
    cmd = args.command
    if cmd == "betti":
        b = betti(k, None if not k.truncated else k.faithful_degree)
        return 0, json.dumps({"betti": b}) if args.json else "betti: " + " ".join(map(str, b)) + "\n"
    if cmd == "fixed":
        fx = fixed_subobject(k)
        b = betti(fx) if fx.labels[0] else []
        if args.json:
            return 0, json.dumps({"fixed_betti": b, "fixed": fx.to_dict()})
        return 0, "fixed betti: " + (" ".join(map(str, b)) or "(empty)") + "\n"
    if cmd == "budgets":
        bud = budgets(k)
        if args.json:
            return 0, json.dumps(dict(zip(("fixed_sum", "hk_sum", "st_sum"), bud.as_tuple())))
        return 0, "fixed={} hk={} st={}\n".format(*bud.as_tuple())
    if cmd == "classify":
        rep = classify(k, args.method)
        return 0, json.dumps(rep.to_dict()) if args.json else _report_text(rep)
    if cmd == "barcode":
        bars = borel.barcode(borel.borel_module(k))
        return 0, json.dumps(borel.barcode_to_json(bars)) if args.json else _bars_text(bars) + "\n"
    if cmd == "e2":
        rows = borel.e2_page(k)
        if args.json:
            return 0, json.dumps([{"q": q, "p0": a, "p_positive": b} for q, (a, b) in enumerate(rows)])
        return 0, "q,p0,p_positive\n" + "".join(f"{q},{a},{b}\n" for q, (a, b) in enumerate(rows))
    if cmd == "pages":
        pages = borel.spectral_pages(k, args.n or 4)
        if args.json:
            return 0, json.dumps([{"r": r, "p": p, "q": q, "dim": d, "rank_out": pages.ranks[r][(p, q)]}
                                  for r in sorted(pages.pages) for (p, q), d in sorted(pages.pages[r].items())])
        return 0, pages.to_csv()
    n_max = args.n or (4 if k.dim <= 1 else 3)  # graphs are cheap enough for one more level
    if cmd == "verify-stability":
        rep = stability_check(k, n_max)
    elif cmd == "verify-splitting":
        rep = splitting_check(k, n_max)
    else:
        rep = verify_main_theorem(k, n_max)
    code = 0 if rep.ok and all(lv.verdict is None or lv.verdict.galois_maximal for lv in rep.levels) else 1
    return code, json.dumps(rep.to_dict()) if args.json else rep.table()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="c2max", description="Classify finite C2-spaces as Maximal or Galois-Maximal.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("expr", help='space expression, e.g. "wedge(lind(circle), sphere(1,1))"')
    p.add_argument("--n", type=int, default=None, help="tower height for verify-* (default 4 for graphs, else 3); last page for pages (default 4)")
    p.add_argument("--truncate", type=int, default=None,
                   help=f"cap the degree of symmetric products (default from ${TRUNCATE_ENV})")
    p.add_argument("--method", choices=("definition", "borel", "degeneration", "all"), default="all")
    p.add_argument("--json", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.truncate is None and os.environ.get(TRUNCATE_ENV):
        args.truncate = int(os.environ[TRUNCATE_ENV])
    try:
        code, out = _run(args)
    except (ContractError, borel.StabilizationFailure) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # route disagreement and anything unexpected
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
