"""Verification suites replaying published tables against the computations.

Each suite returns a `SuiteResult`; a suite passes when it has no failures.
Golden data lives in ``prymeigen/data``: the cusp table, the connecting
chains and move-graph figures, and the exceptional-case directions.
Nothing here adjusts a published value to make it agree.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable

from .butterfly import INF, apply, apply_complete, is_admissible, label, max_finite_q, parse_label
from .components import SET_P, SET_Q, SET_S, admissible_discs, set_summary, summary_flags
from .cusps import table1_rows
from .prototypes import GENUS3, GENUS4, MODEL_B, CompletePrototype, Prototype, enumerate_complete, enumerate_prototypes

SUITES = ("table1", "sd", "pd", "qd", "chains", "geometry", "genus4")

# Columns of the cusp table that are computed; the remaining extras are reference data.
TABLE1_COMPUTED = ("g2_model", "g3_model", "g3_extra", "g4_model", "g3_total")

Summarizer = Callable[[int, int, str], dict]


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def to_dict(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "checked": self.checked, "failures": self.failures, "notes": self.notes}

    def lines(self) -> list[str]:
        status = "PASS" if self.ok else "FAIL"
        out = [f"{status} {self.name}: {self.checked} checks, {len(self.failures)} failures"]
        out += [f"  FAIL {m}" for m in self.failures]
        out += [f"  note {m}" for m in self.notes]
        return out


def load_text(name: str) -> str:
    return resources.files("prymeigen.data").joinpath(name).read_text(encoding="utf-8")


def load_table1() -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(load_text("table1.csv"))))


def load_chains() -> dict:
    return json.loads(load_text("table3_chains.json"))


def load_exceptional_directions() -> list[dict]:
    return json.loads(load_text("exceptional_directions.json"))


# -- suites ------------------------------------------------------------------


def suite_table1() -> SuiteResult:
    res = SuiteResult("table1")
    computed = {r["D"]: r for r in table1_rows(5, 52)}
    for row in load_table1():
        D = int(row["D"])
        got = computed.get(D)
        if got is None:
            res.fail(f"D={D}: no computed row")
            continue
        for col in TABLE1_COMPUTED:
            res.checked += 1
            want = row[col]
            have = "" if got[col] is None else str(got[col])
            if want != have:
                res.fail(f"D={D} {col}: published {want or '-'}, computed {have or '-'}")
    res.notes.append("g2_extra and g4_extra are reference values, not computed")
    return res


def summaries(discs: Iterable[int], genus: int, kind: str, summarize: Summarizer = set_summary, jobs: int = 1) -> list[dict]:
    """``summarize`` over ``discs`` in input order; ``jobs > 1`` fans out over processes."""
    discs = list(discs)
    if jobs <= 1:
        return [summarize(D, genus, kind) for D in discs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(summarize, discs, [genus] * len(discs), [kind] * len(discs), chunksize=32))


def suite_components(name: str, lo: int, hi: int, genus: int, kinds: tuple[str, ...], summarize: Summarizer = set_summary, jobs: int = 1) -> SuiteResult:
    res = SuiteResult(name)
    discs = admissible_discs(lo, hi, genus)
    for kind in kinds:
        for s in summaries(discs, genus, kind, summarize, jobs):
            res.checked += 1
            _, flags = summary_flags(s)
            res.failures += [f"D={s['disc']} genus {genus} {m}" for m in flags]
    res.notes.append(f"{len(discs)} discriminants in [{lo}, {hi}]")
    return res


def _moves(p: Prototype) -> list:
    return list(range(1, max_finite_q(p.h, p.e, p.disc) + 1)) + [INF]


def suite_chains() -> SuiteResult:
    """Replay every printed connecting chain and every arrow of the move-graph figures."""
    res = SuiteResult("chains")
    data = load_chains()
    for entry in data["table3"]:
        D = entry["D"]
        for ci, chain in enumerate(entry["chains"]):
            for si, step in enumerate(chain["steps"]):
                res.checked += 1
                p = Prototype(*step["from"], D)
                q = parse_label(step["move"])
                where = f"D={D} chain {ci + 1} step {si + 1} {tuple(step['from'])} {step['move']}"
                if not is_admissible(p, q):
                    res.fail(f"{where}: move is not admissible")
                    continue
                got = apply(p, q).key
                if list(got) != step["to"]:
                    res.fail(f"{where}: printed {tuple(step['to'])}, computed {got}")
        res.checked += 1
        if sorted(sorted(c) for c in entry["components_printed"]) != entry["components_computed"]:
            res.fail(f"D={D}: printed components {entry['components_printed']}, computed {entry['components_computed']}")
    for key, routes in data["corrections"].items():
        D = int(key.split("/")[0])
        for r in routes:
            route = r["route"]
            ok = all(
                list(apply(Prototype(*a, D), parse_label(q)).key) == b
                for a, q, b in zip(route[0::2], route[1::2], route[2::2])
            )
            res.notes.append(f"D={D} chain {int(key.split('/')[1]) + 1} corrected route {'verified' if ok else 'FAILS'}: {_route_text(route)}")
    for D, fig in data["figures"].items():
        D = int(D)
        drawn = sorted((tuple(a), q, tuple(b)) for a, q, b in fig["edges"])
        computed = sorted(
            (p.key, label(q), apply(p, q).key) for p in enumerate_prototypes(D) for q in _moves(p)
        )
        res.checked += len(drawn)
        for e in sorted(set(drawn) - set(computed)):
            res.fail(f"D={D} figure arrow {e[0]} {e[1]} -> {e[2]} is not a computed move")
        for e in sorted(set(computed) - set(drawn)):
            res.fail(f"D={D} computed move {e[0]} {e[1]} -> {e[2]} is not drawn")
    return res


def _route_text(route: list) -> str:
    return " ".join(x if isinstance(x, str) else "(" + ",".join(map(str, x)) + ")" for x in route)


def suite_geometry(max_disc: int = 60, saddle_bound: int = 10) -> SuiteResult:
    """Exceptional-case decompositions, geometric moves for small D, and the D = 8 simple-cylinder claim."""
    from .exactnum import QuadNum
    from .geometry import build_surface, decompose, find_simple_cylinders, geometric_move, identify, parse_direction

    res = SuiteResult("geometry")
    for case in load_exceptional_directions():
        D = case["disc"]
        p = Prototype(*case["model_b"], D, GENUS3, MODEL_B)
        want = CompletePrototype(Prototype(*case["expected"][:4], D), case["expected"][4])
        res.checked += 1
        got = identify(decompose(build_surface(p, "B"), parse_direction(case["direction"], p)))
        if got != want:
            res.fail(f"D={D} {p} direction {case['direction']!r}: expected {want}, identified {got}")
    n = 0
    for D in admissible_discs(17, max_disc, GENUS3):
        for cp in enumerate_complete(D):
            for q in [q for q in (1, 2, 3, 4) if is_admissible(cp.proto, q)] + [INF]:
                n += 1
                got = geometric_move(cp, q)
                if got != apply_complete(cp, q):
                    res.fail(f"D={D} {cp} {label(q)}: geometry gives {got}, moves give {apply_complete(cp, q)}")
    res.checked += n
    res.notes.append(f"{n} geometric moves for D <= {max_disc}")
    surf = build_surface(Prototype(1, 1, 0, 0, 8, GENUS3, MODEL_B), "B")
    found = find_simple_cylinders(surf, QuadNum(saddle_bound, 0, 8))
    res.checked += 1
    if found:
        res.fail(f"D=8: {len(found)} simple cylinders with holonomy bound {saddle_bound}")
    return res


def run_suite(name: str, jobs: int = 1, summarize: Summarizer = set_summary, **opts) -> SuiteResult:
    if name == "table1":
        return suite_table1()
    if name == "sd":
        return suite_components("sd", 17, opts.get("hi", 6889), GENUS3, (SET_S,), summarize, jobs)
    if name == "pd":
        return suite_components("pd", 17, opts.get("hi", 2000), GENUS3, (SET_P,), summarize, jobs)
    if name == "qd":
        return suite_components("qd", 17, opts.get("hi", 2000), GENUS3, (SET_Q,), summarize, jobs)
    if name == "genus4":
        return suite_components("genus4", 12, opts.get("hi", 2000), GENUS4, (SET_S, SET_P), summarize, jobs)
    if name == "chains":
        return suite_chains()
    if name == "geometry":
        return suite_geometry(opts.get("max_disc", 60), opts.get("saddle_bound", 10))
    raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
