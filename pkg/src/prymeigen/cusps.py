"""Cusp counts of the Weierstrass curves in genus 2, 3 and 4.

Three-cylinder (genus 3) and four-cylinder (genus 4) cusps are counted by
prototypes:

    genus 2   |P_D|
    genus 3   2|P_D| + |P'_D|      plus 2|P^s_D| when D = d^2
    genus 4   |P~_D| + |P~'_D|

For square D the genus-2 and genus-4 curves have further cusps for which no
counting formula is available here; those summands are carried as reference
data only and are never computed.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import isqrt

from .exactnum import QuadNum, is_square, lattice_basis
from .prototypes import (
    GENUS3,
    GENUS4,
    MODEL_A,
    MODEL_B,
    CompletePrototype,
    enumerate_genus2,
    enumerate_tuples,
    square_cusp_count,
)

# Extra cusps of square discriminants in genus 2 and 4, transcribed for comparison only.
REFERENCE_G2_EXTRA: dict[int, int] = {9: 1, 16: 1, 25: 2, 36: 3, 49: 5}
REFERENCE_G4_EXTRA: dict[int, int] = {9: 0, 16: 1, 25: 3, 36: 5, 49: 9}

CSV_COLUMNS = ["D", "g2_model", "g2_extra", "g3_model", "g3_extra", "g4_model", "g4_extra", "g3_total"]


@dataclass(frozen=True)
class CuspReport:
    disc: int
    genus: int
    three_cyl_count: int
    square_extra: int | None
    extra_source: str  # "computed", "reference", "absent" or "not computed"

    @property
    def total(self) -> int | None:
        if self.square_extra is None:
            return None if self.extra_source == "not computed" else self.three_cyl_count
        return self.three_cyl_count + self.square_extra


def cusp_count(D: int, genus: int) -> CuspReport:
    """Cusp report for ``W_D(2g - 2)``; see the module docstring for the formulas."""
    if D % 4 not in (0, 1) or D <= 0:
        raise ValueError(f"{D} is not a discriminant")
    square = is_square(D)
    if genus == 2:
        n = len(enumerate_genus2(D))
        if not square:
            return CuspReport(D, 2, n, None, "absent")
        ref = REFERENCE_G2_EXTRA.get(D)
        return CuspReport(D, 2, n, ref, "reference" if ref is not None else "not computed")
    if genus == GENUS3:
        n = 2 * len(enumerate_tuples(D, GENUS3, MODEL_A)) + len(enumerate_tuples(D, GENUS3, MODEL_B))
        if not square:
            return CuspReport(D, 3, n, None, "absent")
        return CuspReport(D, 3, n, 2 * square_cusp_count(D), "computed")
    if genus == GENUS4:
        n = len(enumerate_tuples(D, GENUS4, MODEL_A)) + len(enumerate_tuples(D, GENUS4, MODEL_B))
        if not square:
            return CuspReport(D, 4, n, None, "absent")
        ref = REFERENCE_G4_EXTRA.get(D)
        return CuspReport(D, 4, n, ref, "reference" if ref is not None else "not computed")
    raise ValueError(f"genus must be 2, 3 or 4, got {genus}")


def table1_rows(lo: int = 5, hi: int = 52) -> list[dict]:
    rows = []
    for D in range(lo, hi + 1):
        if D % 4 not in (0, 1) or D < 5:
            continue
        g2, g3, g4 = (cusp_count(D, g) for g in (2, 3, 4))
        rows.append({
            "D": D,
            "g2_model": g2.three_cyl_count,
            "g2_extra": g2.square_extra,
            "g3_model": g3.three_cyl_count,
            "g3_extra": g3.square_extra,
            "g4_model": g4.three_cyl_count,
            "g4_extra": g4.square_extra,
            "g3_total": g3.total,
            "square": is_square(D),
            "extra_sources": {"g2": g2.extra_source, "g3": g3.extra_source, "g4": g4.extra_source},
        })
    return rows


def _cell(v) -> str:
    return "" if v is None else str(v)


def emit_table1(lo: int = 5, hi: int = 52, fmt: str = "csv") -> str:
    """Table of cusp counts for discriminants in ``[lo, hi]`` as CSV, Markdown or JSON."""
    rows = table1_rows(lo, hi)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([_cell(r[c]) for c in CSV_COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps(rows, indent=1, sort_keys=True) + "\n"
    if fmt == "md":
        lines = [
            "| D | g2 P_D | g2 cusps | g3 cusps | g4 cusps |",
            "|---|---|---|---|---|",
        ]
        for r in rows:
            def split(model, extra, mark=""):
                return str(model) if extra is None else f"**{model}+{extra}{mark}**"

            d = f"**{r['D']}**" if r["square"] else str(r["D"])
            lines.append(
                f"| {d} | {r['g2_model']} | {split(r['g2_model'], r['g2_extra'], '†')} "
                f"| {split(r['g3_model'], r['g3_extra'])} | {split(r['g4_model'], r['g4_extra'], '†')} |"
            )
        lines.append("")
        lines.append("† reference value, not computed")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected csv, md or json")


# -- square-tiled degree -----------------------------------------------------


def square_tiled_degree(cp: CompletePrototype) -> int:
    """Number of squares of the primitive square-tiled surface of ``cp``.

    Area over the covolume of the absolute period lattice: ``lambda Z^2 +
    Z(w,0) + Z(t,h)`` with area ``d lambda`` for sign ``+``, and
    ``(lambda/2) Z^2 + Z(w,0) + Z(t,h)`` with area ``d lambda / 2`` for sign ``-``.
    """
    p = cp.proto
    D = p.disc
    if not is_square(D):
        raise ValueError(f"D={D} is not a perfect square")
    d = isqrt(D)
    lam = (QuadNum(p.e, 1, D) / 2).to_fraction()
    side = lam if cp.eps > 0 else lam / 2
    area = d * side
    vectors = [(side, Fraction(0)), (Fraction(0), side), (Fraction(p.w), Fraction(0)), (Fraction(p.t), Fraction(p.h))]
    (x, _), (_, y) = lattice_basis(vectors)
    n = area / (x * y)
    if n.denominator != 1:
        raise AssertionError(f"non-integral square count {n} for {cp}")
    n = int(n)
    if n not in (d, 2 * d) or (d % 2 == 0 and n != d):
        raise AssertionError(f"square count {n} for {cp} is not d or 2d as expected (d={d})")
    return n


def report_to_dict(r: CuspReport) -> dict:
    d = asdict(r)
    d["total"] = r.total
    return d
