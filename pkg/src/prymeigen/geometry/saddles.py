"""Saddle connections up to a length bound, and simple cylinders.

Saddle connections are enumerated by unfolding polygons inside angular wedges
from every corner of the cone point.  Each wedge is narrowed to the window
edge it crosses, and windows that miss the box ``[-B, B]^2`` are pruned.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exactnum import QuadNum, qsign
from .decompose import DEFAULT_BUDGET, CylinderDecomposition, DecompositionError, decompose
from .surface import TranslationSurface, Vec, cross, vadd, vsub


@dataclass(frozen=True)
class SimpleCylinder:
    direction: Vec
    holonomy: Vec
    circumference_sq: QuadNum  # squared length of the core curve
    decomposition_model: str


def _in_box(v: Vec, bound: QuadNum) -> bool:
    return qsign(bound - abs(v[0])) >= 0 and qsign(bound - abs(v[1])) >= 0


def _segment_meets_box(a: Vec, b: Vec, bound: QuadNum) -> bool:
    """Exact separating-axis test between the segment ``ab`` and ``[-bound, bound]^2``."""
    for i in (0, 1):
        if qsign(a[i] - bound) > 0 and qsign(b[i] - bound) > 0:
            return False
        if qsign(a[i] + bound) < 0 and qsign(b[i] + bound) < 0:
            return False
    d = vsub(b, a)
    signs = set()
    for cx in (bound, -bound):
        for cy in (bound, -bound):
            signs.add(qsign(cross(d, vsub((cx, cy), a))))
    return not (signs == {1} or signs == {-1})


def saddle_connections(surf: TranslationSurface, bound, budget: int = DEFAULT_BUDGET) -> list[Vec]:
    """Holonomies of all saddle connections with both coordinates at most ``bound`` in absolute value.

    Each saddle connection appears once per starting corner, so a vector and
    its negative are both listed.
    """
    D = surf.disc
    B = QuadNum(0, 0, D) + bound
    found: set[Vec] = set()
    steps = [budget]

    def explore(p: int, shift: Vec, entry: int, right: Vec, left: Vec) -> None:
        steps[0] -= 1
        if steps[0] < 0:
            raise DecompositionError("saddle connection search exceeded its step budget")
        poly = surf.polygons[p]
        n = len(poly)
        dev = [vadd(v, shift) for v in poly]
        skip = {entry, (entry + 1) % n}
        for j in range(n):
            if j in skip:
                continue
            v = dev[j]
            if qsign(cross(right, v)) > 0 and qsign(cross(v, left)) > 0 and _in_box(v, B):
                found.add(v)
        for m in range(n):
            if m == entry:
                continue
            _window(p, m, dev, right, left)

    def _window(p: int, m: int, dev: list[Vec], right: Vec, left: Vec) -> None:
        n = len(dev)
        a, b = dev[m], dev[(m + 1) % n]
        # an exit edge has the apex on its inner side, so a is clockwise of b
        p1, p2 = a, b
        if qsign(cross(p1, p2)) <= 0:
            return
        r = p1 if qsign(cross(right, p1)) > 0 else right
        lft = p2 if qsign(cross(p2, left)) > 0 else left
        if qsign(cross(r, lft)) <= 0:
            return
        if not _segment_meets_box(a, b, B):
            return
        p2_, m2 = surf.gluings[(p, m)]
        target = surf.polygons[p2_]
        # vertex m of p is glued to vertex m2+1 of the partner
        new_shift = vsub(a, target[(m2 + 1) % len(target)])
        explore(p2_, new_shift, m2, r, lft)

    for p, poly in enumerate(surf.polygons):
        n = len(poly)
        for i in range(n):
            apex = poly[i]
            dev = [vsub(v, apex) for v in poly]
            right, left = dev[(i + 1) % n], dev[(i - 1) % n]
            for v in (right, left):
                if _in_box(v, B):
                    found.add(v)
            for j in range(n):
                if j in (i, (i + 1) % n, (i - 1) % n):
                    continue
                v = dev[j]
                if qsign(cross(right, v)) > 0 and qsign(cross(v, left)) > 0 and _in_box(v, B):
                    found.add(v)
            for m in range(n):
                if m in (i, (i - 1) % n):
                    continue
                _window(p, m, dev, right, left)
    return sorted(found, key=lambda v: (float(v[0]), float(v[1])))


def _direction_key(v: Vec) -> tuple:
    """Key identifying the unoriented line spanned by ``v``."""
    if v[0]:
        return ("slope", v[1] / v[0])
    return ("vertical",)


def find_simple_cylinders(surf: TranslationSurface, bound, budget: int = DEFAULT_BUDGET) -> list[SimpleCylinder]:
    """Simple cylinders whose core holonomy has both coordinates bounded by ``bound``.

    A simple cylinder is bounded by one saddle connection on each side, with
    the same holonomy as its core curve, so it suffices to decompose along
    every saddle connection direction found within the bound.
    """
    D = surf.disc
    B = QuadNum(0, 0, D) + bound
    if qsign(B) <= 0:
        raise ValueError("length bound must be positive")
    directions: dict[tuple, Vec] = {}
    for v in saddle_connections(surf, B, budget):
        key = _direction_key(v)
        if key not in directions or qsign(v[0]) > 0 or (not v[0] and qsign(v[1]) > 0):
            directions.setdefault(key, v)
            if qsign(v[0]) > 0 or (not v[0] and qsign(v[1]) > 0):
                directions[key] = v
    out: list[SimpleCylinder] = []
    seen: set[Vec] = set()
    for key in sorted(directions, key=lambda k: (k[0], float(k[1]) if len(k) > 1 else 0.0)):
        v = directions[key]
        dec: CylinderDecomposition = decompose(surf, v, budget)
        for i, c in enumerate(dec.cylinders):
            if not c.is_simple:
                continue
            hol = dec.core_holonomy(i)
            if hol in seen or not _in_box(hol, B):
                continue
            seen.add(hol)
            out.append(SimpleCylinder(v, hol, hol[0] * hol[0] + hol[1] * hol[1], dec.model))
    return out
