"""Command-line interface.

Exit codes: 0 success, 1 a property or bound was violated, 2 bad input,
3 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import braid, diagram, dn, fuzz, moves
from .diagram import components
from .invariants import DEFAULT_CAP, CapExceeded, jones_fingerprint, linking_matrix
from .iu import Interval, TableOracle, iu, iu_eps_delta, iu_prime, move_lower_bound
from .laurent import DELTA, pow_scalar
from .unknotting import (
    SearchBudget,
    format_witness,
    identify,
    parse_witness,
    search_witness,
    u_enclose,
    verify_witness,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def load_diagram(path: str) -> diagram.Diagram:
    text = _read(path)
    try:
        if text.lstrip().startswith("{"):
            return diagram.decode_json(text)
        return diagram.decode(text)
    except (diagram.DiagramError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _budget(args) -> SearchBudget:
    return SearchBudget(
        max_changes=args.max_changes,
        subset_budget=args.subset_budget,
        riii_depth=args.riii_budget,
        cap=args.max_crossings,
    )


def cmd_invariants(args) -> int:
    d = load_diagram(args.file)
    lab = components(d)
    lk = linking_matrix(d)
    fp = jones_fingerprint(d, args.max_crossings)
    m = lab.count
    payload = {
        "crossings": d.num_crossings,
        "components": m,
        "signs": {str(c): s for c, s in sorted(d.signs.items())},
        "writhe": diagram.writhe(d),
        "linking_matrix": lk.to_json(),
        "total_linking": lk.total(),
        "fingerprint": str(fp),
        "unlink_fingerprint": fp == pow_scalar(DELTA, max(m - 1, 0)),
    }
    text = "\n".join(
        [
            f"crossings    {d.num_crossings}",
            f"components   {m}",
            f"writhe       {payload['writhe']}",
            f"signs        {' '.join(f'{c}:{s:+d}' for c, s in sorted(d.signs.items()))}",
            f"linking      {lk.to_json()}",
            f"fingerprint  {fp}",
        ]
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_iu(args) -> int:
    d = load_diagram(args.file)
    budget = _budget(args)
    oracle = TableOracle(args.assume_conjecture, budget, cap=args.max_crossings)
    u_l = u_enclose(d, identify(d, cap=args.max_crossings), args.assume_conjecture, budget)
    v = iu(d, oracle, u_l)
    eps = {
        f"{e:+d},{t:+d}": iu_eps_delta(d, e, t, oracle, u_l) for e in (1, -1) for t in (1, -1)
    }
    prime = iu_prime(d, oracle, u_l)
    # a crossing-free diagram has every variant equal to zero
    zero = Interval.exact(0)
    bounds = {"matched-RII-RIII": move_lower_bound(v, zero, "matched-RII-RIII")}
    for key, val in eps.items():
        bounds[f"all-moves {key}"] = move_lower_bound(val, zero, "all-moves")
    payload = {
        "flags": {"assume_conjecture": args.assume_conjecture},
        "u_link": u_l.to_json(),
        "iu": v.to_json(),
        "iu_eps_delta": {k: x.interval.to_json() for k, x in eps.items()},
        "iu_prime": prime.interval.to_json(),
        "bounds_to_crossing_free": {k: b.to_json() for k, b in bounds.items()},
    }
    lines = [f"u(L)        {u_l}", f"iu          {v}"]
    lines += [f"iu({k})  {x}" for k, x in eps.items()]
    lines.append(f"iu'         {prime}")
    lines += [f"moves to a crossing-free diagram ({k}) >= {b.certified}" for k, b in bounds.items()]
    lines.append("crossing  sign  smoothing        u        term")
    for t in v.breakdown:
        lines.append(f"{t.crossing:>8}  {t.sign:>+4}  {str(t.census):<15}  {str(t.u):<7}  {t.term}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    d = load_diagram(args.diagram)
    if args.witness:
        try:
            w = parse_witness(_read(args.witness))
        except ValueError as exc:
            raise InputError(f"{args.witness}: {exc}") from None
        ok = verify_witness(d, w)
        _emit(args, {"witness_ok": ok, "changes": list(w.changes)}, f"witness {'verified' if ok else 'REJECTED'}")
        return EXIT_OK if ok else EXIT_VIOLATION
    if not args.moves:
        raise InputError("verify needs a moves file or --witness")
    try:
        seq = moves.parse_moves(_read(args.moves))
    except ValueError as exc:
        raise InputError(f"{args.moves}: {exc}") from None
    try:
        final, tally = moves.verify_sequence(d, seq)
    except moves.SequenceError as exc:
        _emit(args, {"ok": False, "index": exc.index, "reason": str(exc)}, f"error: {exc}")
        return EXIT_VIOLATION
    payload = {
        "ok": True,
        "length": tally.total,
        "tally": tally.as_dict(),
        "final_crossings": final.num_crossings,
        "final_loops": final.free_loops,
    }
    text = [f"moves            {tally.total}"]
    text += [f"  {k:<22} {v}" for k, v in sorted(tally.as_dict().items())]
    text += [f"final crossings  {final.num_crossings}", f"final loops      {final.free_loops}"]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_dn(args) -> int:
    rep = dn.report(args.n, args.assume_conjecture, cap=args.max_n)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"D{args.n}.diagram").write_text(diagram.encode(dn.build(args.n, cap=max(args.n, dn.MOVE_CAP))))
        (out / f"D{args.n}.moves").write_text(dn.export_sequence(args.n))
        (out / f"D{args.n}.report.json").write_text(rep.dumps() + "\n")
    _emit(args, rep.to_json(), rep.to_text())
    return EXIT_OK


def cmd_census(args) -> int:
    entries = dn.census(args.n, args.assume_conjecture, cap=args.max_n)
    payload = {"n": args.n, "census": [e.to_json() for e in entries]}
    lines = ["crossing  sign  predicted        identified       u"]
    for e in entries:
        lines.append(f"{e.crossing:>8}  {e.sign:>+4}  {str(e.predicted):<15}  {str(e.identified):<15}  {e.u}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_fuzz(args) -> int:
    results = fuzz.run_all(args.seed, args.scale, args.suite or None)
    payload = {r.name: {"checked": r.checked, "violations": r.violations} for r in results}
    _emit(args, payload, "\n".join(str(r) for r in results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_VIOLATION


def cmd_encode(args) -> int:
    try:
        b = braid.dn_word(args.dn) if args.dn else braid.parse(args.braid or "")
    except braid.BraidError as exc:
        raise InputError(str(exc)) from None
    d = braid.closure(b)
    print(diagram.encode_json(d) if args.json else diagram.encode(d), end="" if not args.json else "\n")
    return EXIT_OK


def cmd_decode(args) -> int:
    d = load_diagram(args.file)
    if args.json:
        print(diagram.encode_json(d))
    else:
        print(diagram.encode(d), end="")
    return EXIT_OK


def cmd_search(args) -> int:
    d = load_diagram(args.file)
    w = search_witness(d, _budget(args))
    if w is None:
        _emit(args, {"found": False}, "no witness within budget")
        return EXIT_OK
    text = format_witness(w)
    if args.out:
        Path(args.out).write_text(text)
    _emit(args, {"found": True, "changes": list(w.changes), "moves": len(w.moves)}, text.rstrip())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unlinkbound", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--assume-conjecture", action="store_true", help="use u = k-1 for odd composites")
    common.add_argument("--max-crossings", type=int, default=DEFAULT_CAP, help="bracket size cap")
    common.add_argument("--riii-budget", type=int, default=8, help="RIII depth when simplification stalls")
    common.add_argument("--subset-budget", type=int, default=2000, help="crossing subsets tried by search")
    common.add_argument("--max-changes", type=int, default=4, help="largest crossing subset tried")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", parents=[common], help="components, signs, linking, fingerprint")
    s.add_argument("file")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("iu", parents=[common], help="iu and its variants with move-count bounds")
    s.add_argument("file")
    s.set_defaults(func=cmd_iu)

    s = sub.add_parser("verify", parents=[common], help="replay a move sequence or a witness")
    s.add_argument("diagram")
    s.add_argument("moves", nargs="?")
    s.add_argument("--witness")
    s.set_defaults(func=cmd_verify)

    for name, func, hlp in (("dn", cmd_dn, "full report for D_n"), ("census", cmd_census, "smoothing census of D_n")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("n", type=int)
        s.add_argument("--max-n", type=int, default=None, help="raise the n cap (slow)")
        if name == "dn":
            s.add_argument("--out", help="directory for the diagram, moves and report files")
        s.set_defaults(func=func)

    s = sub.add_parser("fuzz", parents=[common], help="randomized property suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--scale", type=float, default=1.0, help="multiply default sample counts")
    s.add_argument("--suite", action="append", choices=sorted(fuzz.SUITES))
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("encode", parents=[common], help="diagram of a braid closure")
    s.add_argument("braid", nargs="?", help="e.g. 's1^-1 s2 @3'")
    s.add_argument("--dn", type=int, help="use the D_n braid")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("decode", parents=[common], help="validate and re-emit a diagram file")
    s.add_argument("file")
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("search", parents=[common], help="crossing-change search with a witness")
    s.add_argument("file")
    s.add_argument("--out", help="write the witness here")
    s.set_defaults(func=cmd_search)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    for name in ("max_crossings", "riii_budget", "subset_budget", "max_changes"):
        if getattr(args, name) < 0 or (name == "max_crossings" and args.max_crossings == 0):
            print(f"error: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (dn.CrossCheckError, AssertionError) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
