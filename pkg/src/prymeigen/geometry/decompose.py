"""Cylinder decompositions in a given direction, and prototype identification.

The surface is first mapped by ``M = [[vx, vy], [-vy, vx]]``, which sends the
direction ``v`` to the positive horizontal.  The five rightward separatrices
are traced to saddle connections.  Each polygon is then cut into horizontal
slabs at every vertex and separatrix height, and slabs are chained through
their right edges into cylinders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..exactnum import QuadNum, qsign
from ..prototypes import GENUS3, MODEL_A, MODEL_B, CompletePrototype, Prototype, is_valid
from .surface import (
    MODEL_AMINUS,
    MODEL_APLUS,
    MODEL_MODEL_B,
    TranslationSurface,
    Vec,
    build_surface,
    vsub,
)

DEFAULT_BUDGET = 10**6
MODEL_C = "C"
MODEL_D = "D"


class DecompositionError(RuntimeError):
    """Raised when a direction is not periodic or the step budget runs out."""


class IdentificationError(ValueError):
    pass


def qfloor(x: QuadNum) -> int:
    n = math.floor(float(x))
    while qsign(x - n) < 0:
        n -= 1
    while qsign(x - (n + 1)) >= 0:
        n += 1
    return n


def qmod(x: QuadNum, m: QuadNum) -> QuadNum:
    return x - m * qfloor(x / m)


@dataclass(frozen=True)
class Piece:
    """Part of a saddle connection inside one polygon, at height ``y`` from ``xa`` to ``xb``."""

    poly: int
    y: QuadNum
    xa: QuadNum
    xb: QuadNum
    sc: int
    offset: QuadNum


@dataclass
class Cylinder:
    circumference: QuadNum
    height: QuadNum
    slabs: list[tuple[int, QuadNum, QuadNum]]
    bottom: dict[int, QuadNum] = field(default_factory=dict)
    top: dict[int, QuadNum] = field(default_factory=dict)
    tag: str = ""  # "fixed" or "swapped"
    partner: int = -1
    twist: QuadNum | None = None

    @property
    def is_simple(self) -> bool:
        return len(self.bottom) == 1 and len(self.top) == 1

    def modulus(self) -> QuadNum:
        return self.height / self.circumference


@dataclass
class CylinderDecomposition:
    direction: Vec
    surface: TranslationSurface  # the rotated surface, with horizontal cylinders
    cylinders: list[Cylinder]
    saddle_lengths: list[QuadNum]
    model: str
    steps: int

    @property
    def disc(self) -> int:
        return self.surface.disc

    def fixed(self) -> int:
        return next(i for i, c in enumerate(self.cylinders) if c.tag == "fixed")

    def core_holonomy(self, i: int) -> Vec:
        """Holonomy of the core curve of cylinder ``i`` in the original coordinates."""
        vx, vy = self.direction
        n2 = vx * vx + vy * vy
        c = self.cylinders[i].circumference
        return (c * vx / n2, c * vy / n2)

    def summary(self) -> dict:
        return {
            "direction": [str(self.direction[0]), str(self.direction[1])],
            "model": self.model,
            "cylinders": [
                {
                    "circumference": float(c.circumference),
                    "height": float(c.height),
                    "tag": c.tag,
                    "bottom_saddles": len(c.bottom),
                    "top_saddles": len(c.top),
                    "simple": c.is_simple,
                }
                for c in self.cylinders
            ],
            "steps": self.steps,
        }


# -- polygon geometry at a given height ----------------------------------------


def _hits(poly: tuple[Vec, ...], y: QuadNum) -> list[tuple[QuadNum, int]]:
    """x-coordinates where the line at height ``y`` meets the polygon boundary, with edge index."""
    out = []
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        lo, hi = (a[1], b[1]) if a[1] <= b[1] else (b[1], a[1])
        if a[1] == b[1]:
            if a[1] == y:
                out.append((a[0], k))
                out.append((b[0], k))
            continue
        if qsign(y - lo) < 0 or qsign(hi - y) < 0:
            continue
        x = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
        out.append((x, k))
    return out


def _span(poly: tuple[Vec, ...], y: QuadNum) -> tuple[QuadNum, QuadNum]:
    xs = [x for x, _ in _hits(poly, y)]
    return min(xs), max(xs)


def _right_edge(poly: tuple[Vec, ...], y: QuadNum) -> int:
    """Index of the non-horizontal edge on the right boundary at a height that is not a vertex height."""
    best = None
    for x, k in _hits(poly, y):
        if best is None or qsign(x - best[0]) > 0:
            best = (x, k)
    return best[1]


def _vertex_at(poly: tuple[Vec, ...], pt: Vec) -> int | None:
    for i, v in enumerate(poly):
        if v[0] == pt[0] and v[1] == pt[1]:
            return i
    return None


# -- separatrix tracing ---------------------------------------------------------


def _trace(surf: TranslationSurface, p: int, i: int, sc: int, budget: list[int]) -> tuple[list[Piece], QuadNum]:
    poly = surf.polygons[p]
    n = len(poly)
    start = poly[i]
    nxt = poly[(i + 1) % n]
    zero = QuadNum(0, 0, surf.disc)
    if nxt[1] == start[1]:
        # the separatrix runs along a horizontal edge; record it on both sides of the gluing
        length = nxt[0] - start[0]
        tau = surf.translation(p, i)
        p2 = surf.gluings[(p, i)][0]
        return [
            Piece(p, start[1], start[0], nxt[0], sc, zero),
            Piece(p2, start[1] + tau[1], start[0] + tau[0], nxt[0] + tau[0], sc, zero),
        ], length
    pieces: list[Piece] = []
    offset = zero
    x, y = start
    while True:
        budget[0] -= 1
        if budget[0] < 0:
            raise DecompositionError("step budget exhausted; the direction is probably not periodic")
        poly = surf.polygons[p]
        xr = _span(poly, y)[1]
        pieces.append(Piece(p, y, x, xr, sc, offset))
        offset = offset + (xr - x)
        if _vertex_at(poly, (xr, y)) is not None:
            return pieces, offset
        k = _right_edge(poly, y)
        tau = surf.translation(p, k)
        p = surf.gluings[(p, k)][0]
        x, y = xr + tau[0], y + tau[1]


# -- decomposition --------------------------------------------------------------


def _rotation(v: Vec) -> tuple[tuple[QuadNum, QuadNum], tuple[QuadNum, QuadNum]]:
    vx, vy = v
    return ((vx, vy), (-vy, vx))


def horizontal_decomposition(surf: TranslationSurface, budget: int = DEFAULT_BUDGET, direction: Vec | None = None) -> CylinderDecomposition:
    """Cylinders of the horizontal direction of ``surf``."""
    D = surf.disc
    one, zero = QuadNum(1, 0, D), QuadNum(0, 0, D)
    counter = [budget]
    corners = surf.corners_in_direction((one, zero))
    pieces: list[Piece] = []
    lengths: list[QuadNum] = []
    for sc, (p, i) in enumerate(corners):
        ps, length = _trace(surf, p, i, sc, counter)
        pieces.extend(ps)
        lengths.append(length)

    # slabs per polygon
    slab_index: dict[tuple[int, QuadNum], int] = {}
    slabs: list[tuple[int, QuadNum, QuadNum]] = []
    for p, poly in enumerate(surf.polygons):
        hs = {v[1] for v in poly} | {pc.y for pc in pieces if pc.poly == p}
        hs = sorted(hs)
        for y0, y1 in zip(hs, hs[1:]):
            slab_index[(p, y0)] = len(slabs)
            slabs.append((p, y0, y1))

    right: list[tuple[int, Vec]] = []
    for p, y0, y1 in slabs:
        counter[0] -= 1
        k = _right_edge(surf.polygons[p], (y0 + y1) / 2)
        tau = surf.translation(p, k)
        p2 = surf.gluings[(p, k)][0]
        j = slab_index.get((p2, y0 + tau[1]))
        if j is None or slabs[j][2] != y1 + tau[1]:
            raise DecompositionError("slab boundaries do not match across an edge; direction is not periodic")
        right.append((j, tau))

    seen = [False] * len(slabs)
    cylinders: list[Cylinder] = []
    by_poly: dict[int, list[Piece]] = {}
    for pc in pieces:
        by_poly.setdefault(pc.poly, []).append(pc)
    for s0 in range(len(slabs)):
        if seen[s0]:
            continue
        cycle = []
        s = s0
        while not seen[s]:
            seen[s] = True
            cycle.append(s)
            s = right[s][0]
        if s != s0:
            raise DecompositionError("slab chain is not a cycle")
        p0, y00, y10 = slabs[s0]
        height = y10 - y00
        # developed frames: point x of slab i sits at x + shift_i
        shift = (-_span(surf.polygons[p0], y00)[0], -y00)
        circ = zero
        bottom: dict[int, QuadNum] = {}
        top: dict[int, QuadNum] = {}
        frames = []
        for s in cycle:
            p, y0, y1 = slabs[s]
            if y1 - y0 != height:
                raise DecompositionError("slabs of one cylinder have different heights")
            lo, hi = _span(surf.polygons[p], y0)
            circ = circ + (hi - lo)
            frames.append((s, shift))
            shift = vsub(shift, right[s][1])
        if shift[1] != -y00 or abs(shift[0] + _span(surf.polygons[p0], y00)[0]) != circ:
            raise DecompositionError("cylinder does not close up")
        for s, sh in frames:
            p, y0, y1 = slabs[s]
            for pc in by_poly.get(p, ()):
                if pc.y == y0:
                    bottom.setdefault(pc.sc, qmod(pc.xa - pc.offset + sh[0], circ))
                elif pc.y == y1:
                    top.setdefault(pc.sc, qmod(pc.xa - pc.offset + sh[0], circ))
        cylinders.append(Cylinder(circ, height, [slabs[s] for s in cycle], bottom, top))

    _tag_cylinders(surf, cylinders, slab_index, slabs)
    model = _model_tag(cylinders)
    dec = CylinderDecomposition(
        direction if direction is not None else (one, zero),
        surf,
        cylinders,
        lengths,
        model,
        budget - counter[0],
    )
    _canonical_twists(dec)
    return dec


def _tag_cylinders(surf, cylinders, slab_index, slabs) -> None:
    owner = {}
    for ci, c in enumerate(cylinders):
        for s in c.slabs:
            owner[s] = ci
    per_poly: dict[int, list[tuple[int, QuadNum, QuadNum]]] = {}
    for s in slabs:
        per_poly.setdefault(s[0], []).append(s)
    for ci, c in enumerate(cylinders):
        p, y0, y1 = c.slabs[0]
        ym = (y0 + y1) / 2
        lo, hi = _span(surf.polygons[p], ym)
        target, (x, y) = surf.rho_point(p, ((lo + hi) / 2, ym))
        hit = next(s for s in per_poly[target] if qsign(y - s[1]) > 0 and qsign(s[2] - y) > 0)
        other = owner[hit]
        c.partner = other
        c.tag = "fixed" if other == ci else "swapped"


def _model_tag(cylinders: list[Cylinder]) -> str:
    n = len(cylinders)
    if n == 1:
        return MODEL_D
    if n == 2:
        return MODEL_C
    if n == 3:
        fixed = [c for c in cylinders if c.tag == "fixed"]
        if len(fixed) != 1:
            raise DecompositionError("a three-cylinder decomposition must have exactly one fixed cylinder")
        return {1: MODEL_APLUS, 2: MODEL_MODEL_B, 3: MODEL_AMINUS}.get(len(fixed[0].bottom), "?")
    return f"{n}-cylinder"


def _crossing(c: Cylinder, bottom_sc: int, top_sc: int) -> QuadNum:
    return qmod(c.top[top_sc] - c.bottom[bottom_sc], c.circumference)


def _canonical_twists(dec: CylinderDecomposition) -> None:
    """Twist of each cylinder along its canonical crossing.

    A+: the fixed square crosses between its only boundary saddles; a swapped
    cylinder crosses along its self-glued saddle.  A-: the fixed cylinder
    crosses along its self-glued saddle; the swapped squares are simple.  B:
    the swapped cylinder with one bottom saddle ``I`` crosses to the top saddle
    shared with the fixed cylinder's bottom ``a``; the fixed cylinder crosses
    from ``a`` to ``I``.  Other cylinders use their first saddles.
    """
    cyls = dec.cylinders
    for c in cyls:
        c.twist = _crossing(c, min(c.bottom), min(c.top))
    if dec.model in (MODEL_APLUS, MODEL_AMINUS):
        for c in cyls:
            shared = set(c.bottom) & set(c.top)
            if len(shared) == 1:
                k = shared.pop()
                c.twist = _crossing(c, k, k)
    elif dec.model == MODEL_MODEL_B:
        f = cyls[dec.fixed()]
        c1 = next(c for c in cyls if c.tag == "swapped" and len(c.bottom) == 1)
        c2 = cyls[c1.partner]
        (i_sc,) = c1.bottom
        a = (set(c1.top) & set(f.bottom)).pop()
        c1.twist = _crossing(c1, i_sc, a)
        f.twist = _crossing(f, a, i_sc)
        (i2,) = c2.top
        a2 = (set(c2.bottom) & set(f.top)).pop()
        c2.twist = _crossing(c2, a2, i2)


def decompose(surf: TranslationSurface, direction: Vec, budget: int = DEFAULT_BUDGET) -> CylinderDecomposition:
    """Cylinder decomposition of ``surf`` in the direction ``direction``.

    Raises `DecompositionError` when the direction is not periodic within the
    step budget.
    """
    vx, vy = direction
    if not vx and not vy:
        raise ValueError("direction must be nonzero")
    D = surf.disc
    v = (QuadNum(0, 0, D) + vx, QuadNum(0, 0, D) + vy)
    rotated = surf.transform(_rotation(v))
    return horizontal_decomposition(rotated, budget, v)


# -- identification -------------------------------------------------------------


def _as_int(x: QuadNum, what: str) -> int:
    if not x.is_rational() or x.a.denominator != 1:
        raise IdentificationError(f"{what} = {x} is not an integer")
    return int(x.a)


def identify(dec: CylinderDecomposition) -> CompletePrototype | Prototype:
    """Prototype of a three-cylinder decomposition.

    Returns a complete prototype for models A+ and A- and a model-B prototype
    for model B.  With ``mu = lambda/w`` and ``r = h/w`` read off circumference
    and height ratios, ``w = sqrt(D) mu / (mu^2 + 2r)``, ``h = r w`` and
    ``e = 2 mu w - sqrt(D)``.
    """
    if dec.model not in (MODEL_APLUS, MODEL_AMINUS, MODEL_MODEL_B):
        raise IdentificationError(f"model {dec.model} decompositions have no prototype")
    D = dec.disc
    cyls = dec.cylinders
    f = cyls[dec.fixed()]
    if dec.model == MODEL_APLUS:
        big = f
        sw = next(c for c in cyls if c.tag == "swapped")
        mu = big.circumference / sw.circumference
        r = sw.height / big.height * mu
        t_over_w = (sw.twist - big.twist * sw.height / big.height) / sw.circumference
    else:
        if dec.model == MODEL_AMINUS:
            sq = next(c for c in cyls if c.tag == "swapped")
        else:
            sq = next(c for c in cyls if c.tag == "swapped" and len(c.bottom) == 1)
        mu = 2 * sq.circumference / f.circumference
        r = f.height / (2 * sq.height) * mu
        t_over_w = (f.twist - sq.twist * f.height / sq.height) / f.circumference
    root = QuadNum(0, 1, D)
    w = _as_int(root * mu / (mu * mu + 2 * r), "w")
    h = _as_int(r * w, "h")
    e = _as_int(2 * mu * w - root, "e")
    t = _as_int(t_over_w * w, "t")
    g = math.gcd(w, h)
    t %= g
    model = MODEL_B if dec.model == MODEL_MODEL_B else MODEL_A
    proto = Prototype(w, h, t, e, D, GENUS3, model)
    if not is_valid(proto):
        raise IdentificationError(f"identified data {proto} is not a valid prototype")
    if dec.model == MODEL_MODEL_B:
        return proto
    return CompletePrototype(proto, 1 if dec.model == MODEL_APLUS else -1)


# -- geometric butterfly moves ------------------------------------------------


def butterfly_direction(p: Prototype, q: float | int) -> Vec:
    """Direction of the move ``B_q`` on the model-A surface: ``(w + q t, q h)``, or ``(t, h)`` for ``q = inf``."""
    D = p.disc
    if q == math.inf:
        return (QuadNum(p.t, 0, D), QuadNum(p.h, 0, D))
    return (QuadNum(p.w + q * p.t, 0, D), QuadNum(q * p.h, 0, D))


def geometric_move(cp: CompletePrototype, q: float | int, budget: int = DEFAULT_BUDGET) -> CompletePrototype | Prototype:
    """Build the surface of ``cp``, decompose it along the ``B_q`` direction and identify the result."""
    surf = build_surface(cp.proto, MODEL_APLUS if cp.eps > 0 else MODEL_AMINUS)
    return identify(decompose(surf, butterfly_direction(cp.proto, q), budget))
