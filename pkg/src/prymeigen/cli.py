"""Command-line front end.

Exit codes: 0 on success with every check passing, 1 when a verification or
classification check disagrees, 2 on usage errors (bad arguments, invalid
prototype or direction).  Output is deterministic for a fixed command line,
independent of ``--jobs`` and of the cache state.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from functools import partial
from math import isqrt
from pathlib import Path
from typing import Callable, Sequence

from .components import SET_P, SET_Q, SET_S, admissible_discs, build_graph, is_discriminant, set_summary, summary_flags
from .cusps import emit_table1
from .exactnum import is_square
from .prototypes import (
    GENUS3,
    GENUS4,
    MODEL_A,
    MODEL_B,
    CompletePrototype,
    Prototype,
    enumerate_complete,
    enumerate_genus2,
    enumerate_reduced,
    enumerate_square_cusp,
    enumerate_tuples,
    violation,
)
from .verify import SUITES, run_suite, summaries

CACHE_SCHEMA = 1
CACHE_ENV = "PRYM_CACHE_DIR"
EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

ENUM_SETS = ("P", "Pp", "Q", "S", "Ps", "G2")
GRAPH_SETS = (SET_P, SET_Q, SET_S)


class UsageError(ValueError):
    pass


# -- argument parsing ----------------------------------------------------------


def parse_range(text: str) -> tuple[int, int]:
    """``"A..B"`` to ``(A, B)``; a single integer is a one-element range."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"disc range {text!r} must look like A..B") from None
    if lo > hi:
        raise UsageError(f"disc range {text!r} is empty")
    return lo, hi


def parse_proto(text: str, D: int, model: str, genus: int = GENUS3, need_eps: bool = False) -> tuple[Prototype, int | None]:
    """Parse ``w,h,t,e[,eps]`` and validate it for ``D``; ``eps`` is ``+``, ``-``, ``1`` or ``-1``."""
    fields = [f.strip() for f in text.split(",")]
    if len(fields) not in (4, 5):
        raise UsageError(f"prototype {text!r} must be w,h,t,e or w,h,t,e,eps")
    try:
        w, h, t, e = (int(f) for f in fields[:4])
    except ValueError:
        raise UsageError(f"prototype {text!r} has a non-integer entry") from None
    eps = None
    if len(fields) == 5:
        signs = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
        if fields[4] not in signs:
            raise UsageError(f"sign {fields[4]!r} must be + or -")
        eps = signs[fields[4]]
    if need_eps and eps is None:
        raise UsageError("a complete prototype w,h,t,e,eps is required")
    p = Prototype(w, h, t, e, D, genus, model)
    bad = violation(p)
    if bad is not None:
        raise UsageError(f"prototype ({w},{h},{t},{e}) is invalid for D={D}, model {model}: violates {bad}")
    return p, eps


def _check_disc(D: int) -> None:
    if not is_discriminant(D):
        raise UsageError(f"D={D} is not a discriminant (need D > 0 and D = 0 or 1 mod 4)")


def _check_genus_set(genus: int, kind: str) -> None:
    if genus not in (GENUS3, GENUS4):
        raise UsageError(f"genus {genus} has no butterfly graph; use 3 or 4")
    if kind == SET_Q and genus != GENUS3:
        raise UsageError("set Q is defined in genus 3 only")


# -- cache ---------------------------------------------------------------------


def cache_dir(flag: str | None) -> Path | None:
    """The environment variable takes precedence over the flag."""
    path = os.environ.get(CACHE_ENV) or flag
    return Path(path) if path else None


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached_summary(root: Path, D: int, genus: int, kind: str) -> dict:
    """`set_summary` through a per-(D, genus, set) JSON file; stale schema versions are recomputed."""
    path = root / f"v{CACHE_SCHEMA}" / f"g{genus}" / kind / f"{D}.json"
    try:
        blob = json.loads(path.read_text(encoding="utf-8"))
        if blob.get("schema") == CACHE_SCHEMA:
            return blob["summary"]
    except (OSError, ValueError, KeyError):
        pass
    summary = set_summary(D, genus, kind)
    _atomic_write(path, json.dumps({"schema": CACHE_SCHEMA, "summary": summary}, sort_keys=True))
    return summary


def _summarizer(args) -> Callable[[int, int, str], dict]:
    root = cache_dir(getattr(args, "cache_dir", None))
    return set_summary if root is None else partial(cached_summary, root)


# -- output helpers --------------------------------------------------------------


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write(text: str, dest: str | None = None) -> None:
    if dest and dest != "-":
        Path(dest).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    D, genus, kind = args.disc, args.genus, args.set
    _check_disc(D)
    if genus == 2 and kind == "P":
        kind = "G2"
    if kind == "G2":
        header = ["a", "b", "c", "e"]
        rows = [[p.a, p.b, p.c, p.e] for p in enumerate_genus2(D)]
    elif genus not in (GENUS3, GENUS4):
        raise UsageError(f"set {kind} needs genus 3 or 4")
    elif kind == "P":
        header = ["w", "h", "t", "e"]
        rows = [list(p) for p in enumerate_tuples(D, genus, MODEL_A)]
    elif kind == "Pp":
        header = ["w", "h", "t", "e"]
        rows = [list(p) for p in enumerate_tuples(D, genus, MODEL_B)]
    elif kind == "Q":
        _check_genus_set(genus, SET_Q)
        header = ["w", "h", "t", "e", "eps"]
        rows = [list(cp.proto.key) + [cp.eps] for cp in enumerate_complete(D)]
    elif kind == "S":
        header = ["e"]
        rows = [[r.e] for r in enumerate_reduced(D, genus)]
    else:
        if genus != GENUS3:
            raise UsageError("set Ps is defined in genus 3 only")
        header = ["e", "p", "q", "s"]
        rows = [list(sp.quadruple) for sp in enumerate_square_cusp(isqrt(D))] if is_square(D) else []
    if args.format == "csv":
        _write(_csv(header, rows))
    else:
        _write(_dump_json({"disc": D, "genus": genus, "set": kind, "fields": header, "count": len(rows), "items": rows}))
    return EXIT_OK


def cmd_components(args) -> int:
    lo, hi = parse_range(args.disc_range)
    _check_genus_set(args.genus, args.set)
    discs = admissible_discs(lo, hi, args.genus)
    rows = []
    mismatches = 0
    for s in summaries(discs, args.genus, args.set, _summarizer(args), args.jobs):
        want, flags = summary_flags(s)
        mismatches += bool(flags)
        row = {"disc": s["disc"], "size": s["size"], "components": s["components"], "predicted": want, "flags": flags}
        if "partition" in s:
            row["partition"] = s["partition"]
        rows.append(row)
    if args.format == "csv":
        _write(_csv(["D", "size", "components", "predicted", "ok", "flags"],
                    [[r["disc"], r["size"], r["components"], "" if r["predicted"] is None else r["predicted"], int(not r["flags"]), "; ".join(r["flags"])] for r in rows]))
    elif args.format == "md":
        lines = ["| D | size | components | predicted | ok |", "|---|---|---|---|---|"]
        lines += [f"| {r['disc']} | {r['size']} | {r['components']} | {'' if r['predicted'] is None else r['predicted']} | {'yes' if not r['flags'] else 'no'} |" for r in rows]
        _write("\n".join(lines) + "\n")
    else:
        by_count: dict[int, int] = {}
        for r in rows:
            by_count[r["components"]] = by_count.get(r["components"], 0) + 1
        _write(_dump_json({
            "genus": args.genus, "set": args.set, "range": [lo, hi], "discs": len(rows),
            "histogram": {str(k): v for k, v in sorted(by_count.items())},
            "non_generic": [r for r in rows if r["components"] != 1 or r["flags"]],
            "mismatches": [r for r in rows if r["flags"]],
        }))
    if mismatches:
        print(f"{mismatches} discriminants disagree with the predicted classification", file=sys.stderr)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_graph(args) -> int:
    _check_disc(args.disc)
    _check_genus_set(args.genus, args.set)
    g = build_graph(args.disc, args.genus, args.set)
    _write(g.to_dot(), args.dot)
    return EXIT_OK


def cmd_cusps(args) -> int:
    lo, hi = parse_range(args.disc_range)
    _write(emit_table1(lo, hi, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    opts = {}
    if args.max_disc is not None:
        opts["max_disc"] = args.max_disc
    if args.saddle_bound is not None:
        opts["saddle_bound"] = args.saddle_bound
    res = run_suite(args.suite, jobs=args.jobs, summarize=_summarizer(args), **opts)
    if args.format == "json":
        _write(_dump_json(res.to_dict()))
    else:
        _write("\n".join(res.lines()) + "\n")
    return EXIT_OK if res.ok else EXIT_MISMATCH


def cmd_geometry_decompose(args) -> int:
    from .geometry import DecompositionError, DirectionSyntaxError, IdentificationError, build_surface, decompose, identify, normalize_model, parse_direction

    _check_disc(args.disc)
    try:
        model = normalize_model(args.model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    proto_model = MODEL_B if model == "B" else MODEL_A
    p, eps = parse_proto(args.proto, args.disc, proto_model)
    if eps is not None and proto_model == MODEL_A and (eps > 0) != (model == "A+"):
        raise UsageError(f"sign {eps:+d} contradicts model {args.model}")
    try:
        v = parse_direction(args.dir, p)
    except DirectionSyntaxError as exc:
        raise UsageError(str(exc)) from None
    surf = build_surface(p, model)
    try:
        dec = decompose(surf, v, args.budget)
    except DecompositionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    out = dec.summary()
    out["surface"] = {"disc": args.disc, "model": model, "prototype": list(p.key)}
    try:
        ident = identify(dec)
        out["identified"] = str(ident)
    except IdentificationError as exc:
        out["identified"] = None
        out["identification_note"] = str(exc)
    _write(_dump_json(out))
    return EXIT_OK


def cmd_origami(args) -> int:
    from .geometry import OrigamiError, act_word, is_isomorphic, orbit, to_origami

    _check_disc(args.disc)
    if not is_square(args.disc):
        raise UsageError(f"D={args.disc} is not a perfect square; no square-tiled surface")
    p, eps = parse_proto(args.proto, args.disc, MODEL_A, need_eps=True)
    cp = CompletePrototype(p, eps)
    try:
        o = to_origami(cp)
    except OrigamiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    out = {"prototype": str(cp), "squares": o.n, "r": [x + 1 for x in o.r], "u": [x + 1 for x in o.u]}
    if args.orbit:
        orb = orbit(o)
        out["orbit_size"] = len(orb)
    if args.target:
        tp, teps = parse_proto(args.target, args.disc, MODEL_A, need_eps=True)
        target = to_origami(CompletePrototype(tp, teps))
        out["target"] = str(CompletePrototype(tp, teps))
        out["word"] = args.word
        out["word_maps_to_target"] = is_isomorphic(act_word(o, args.word), target) if args.word else None
        if args.orbit:
            out["orbit_contains_target"] = target.canonical() in set(orb)
    _write(_dump_json(out))
    return EXIT_MISMATCH if out.get("word_maps_to_target") is False else EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help=f"cache directory for component sweeps (${CACHE_ENV} takes precedence)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    ap = argparse.ArgumentParser(prog="prymeigen", description="Prototypes, butterfly moves and cusps of Prym eigenform loci.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list a prototype set")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--genus", type=int, choices=(2, 3, 4), default=3)
    p.add_argument("--set", choices=ENUM_SETS, default="P")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("components", parents=[common], help="component counts over a discriminant range")
    p.add_argument("--disc-range", required=True, metavar="A..B")
    p.add_argument("--genus", type=int, choices=(3, 4), default=3)
    p.add_argument("--set", choices=GRAPH_SETS, default=SET_P)
    p.add_argument("--format", choices=("json", "csv", "md"), default="json")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("graph", parents=[common], help="write the butterfly graph as DOT")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--genus", type=int, choices=(3, 4), default=3)
    p.add_argument("--set", choices=GRAPH_SETS, default=SET_P)
    p.add_argument("--dot", default="-", metavar="FILE", help="output file, - for stdout")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("cusps", parents=[common], help="cusp table")
    p.add_argument("--disc-range", default="5..52", metavar="A..B")
    p.add_argument("--format", choices=("csv", "md", "json"), default="csv")
    p.set_defaults(func=cmd_cusps)

    p = sub.add_parser("verify", parents=[common], help="replay a published table")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--max-disc", type=int, help="geometry suite: largest D for geometric moves (default 60)")
    p.add_argument("--saddle-bound", type=int, help="geometry suite: holonomy bound for D=8 (default 10)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("geometry", help="flat-surface computations")
    gsub = p.add_subparsers(dest="geometry_command", required=True)
    g = gsub.add_parser("decompose", parents=[common], help="cylinder decomposition in a direction")
    g.add_argument("--disc", type=int, required=True)
    g.add_argument("--model", required=True, help="Aplus, Aminus or B")
    g.add_argument("--proto", required=True, metavar="w,h,t,e[,eps]")
    g.add_argument("--dir", required=True, metavar="EXPR:EXPR", help="direction over w, h, t, L")
    g.add_argument("--budget", type=int, default=10**6)
    g.set_defaults(func=cmd_geometry_decompose)

    p = sub.add_parser("origami", parents=[common], help="square-tiled surface of a complete prototype")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--proto", required=True, metavar="w,h,t,e,eps")
    p.add_argument("--orbit", action="store_true", help="also compute the L,R-orbit size")
    p.add_argument("--target", metavar="w,h,t,e,eps", help="compare with the surface of another prototype")
    p.add_argument("--word", help="word in L and R applied to the surface before comparing with --target")
    p.set_defaults(func=cmd_origami)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
