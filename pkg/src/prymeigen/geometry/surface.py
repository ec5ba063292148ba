"""Translation surfaces given by convex polygons with QuadNum vertices.

Polygons are listed counterclockwise; edge ``k`` of a polygon runs from vertex
``k`` to vertex ``k + 1``.  Gluings pair edges with opposite vectors.  Every
vertex is a copy of the single cone point, and long sides are subdivided so
that each gluing is a full-edge match.

The Prym involution is stored per polygon as ``(target, c)``: the point ``x``
of the polygon goes to ``c - x`` in polygon ``target``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping

from networkx.utils import UnionFind

from ..exactnum import QuadNum, qsign
from ..prototypes import GENUS3, MODEL_A, MODEL_B, Prototype, lam, validate

Vec = tuple[QuadNum, QuadNum]
Edge = tuple[int, int]

MODEL_APLUS = "A+"
MODEL_AMINUS = "A-"
MODEL_MODEL_B = "B"
_MODEL_ALIASES = {
    "A+": MODEL_APLUS, "Aplus": MODEL_APLUS, "aplus": MODEL_APLUS,
    "A-": MODEL_AMINUS, "Aminus": MODEL_AMINUS, "aminus": MODEL_AMINUS,
    "B": MODEL_MODEL_B, "b": MODEL_MODEL_B,
}


class SurfaceError(ValueError):
    pass


def cross(a: Vec, b: Vec) -> QuadNum:
    return a[0] * b[1] - a[1] * b[0]


def dot(a: Vec, b: Vec) -> QuadNum:
    return a[0] * b[0] + a[1] * b[1]


def vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def in_half_open_sector(a: Vec, b: Vec, d: Vec) -> bool:
    """Whether direction ``d`` lies in the sector from ``a`` counterclockwise to ``b``, ``a`` included.

    The sector angle must be in ``(0, pi]``.
    """
    ca = qsign(cross(a, d))
    if ca == 0:
        return qsign(dot(a, d)) > 0
    return ca > 0 and qsign(cross(d, b)) > 0


@dataclass(frozen=True)
class TranslationSurface:
    disc: int
    polygons: tuple[tuple[Vec, ...], ...]
    gluings: Mapping[Edge, Edge]
    rho: tuple[tuple[int, Vec], ...]
    model: str = ""
    label: str = ""

    # -- edges ---------------------------------------------------------------

    def edge(self, p: int, k: int) -> tuple[Vec, Vec]:
        poly = self.polygons[p]
        return poly[k], poly[(k + 1) % len(poly)]

    def edge_vector(self, p: int, k: int) -> Vec:
        a, b = self.edge(p, k)
        return vsub(b, a)

    def translation(self, p: int, k: int) -> Vec:
        """Vector ``tau`` with ``x`` on edge ``(p, k)`` glued to ``x + tau`` on its partner."""
        p2, k2 = self.gluings[(p, k)]
        a, _ = self.edge(p, k)
        _, b2 = self.edge(p2, k2)
        return vsub(b2, a)

    def edges(self) -> list[Edge]:
        return [(p, k) for p, poly in enumerate(self.polygons) for k in range(len(poly))]

    # -- global quantities ---------------------------------------------------

    def area(self) -> QuadNum:
        total = QuadNum(0, 0, self.disc)
        for poly in self.polygons:
            n = len(poly)
            for i in range(n):
                total = total + cross(poly[i], poly[(i + 1) % n])
        return total / 2

    def vertex_classes(self) -> list[list[tuple[int, int]]]:
        uf = UnionFind((p, i) for p, poly in enumerate(self.polygons) for i in range(len(poly)))
        for (p, k), (p2, k2) in self.gluings.items():
            n, n2 = len(self.polygons[p]), len(self.polygons[p2])
            uf.union((p, k), (p2, (k2 + 1) % n2))
            uf.union((p, (k + 1) % n), (p2, k2))
        return sorted(sorted(c) for c in uf.to_sets())

    def corner_sector(self, p: int, i: int) -> tuple[Vec, Vec]:
        poly = self.polygons[p]
        n = len(poly)
        v = poly[i]
        return vsub(poly[(i + 1) % n], v), vsub(poly[(i - 1) % n], v)

    def corners_in_direction(self, d: Vec) -> list[tuple[int, int]]:
        """Corners whose half-open sector contains ``d``; one per outgoing ray at the cone point."""
        out = []
        for p, poly in enumerate(self.polygons):
            for i in range(len(poly)):
                a, b = self.corner_sector(p, i)
                if in_half_open_sector(a, b, d):
                    out.append((p, i))
        return out

    def cone_angle_multiple(self) -> int:
        """Total cone angle divided by ``2 pi``, counted exactly by outgoing horizontal rays."""
        one = QuadNum(1, 0, self.disc)
        zero = QuadNum(0, 0, self.disc)
        return len(self.corners_in_direction((one, zero)))

    def rho_point(self, p: int, x: Vec) -> tuple[int, Vec]:
        target, c = self.rho[p]
        return target, vsub(c, x)

    def fixed_point_count(self) -> int:
        """Fixed points of the involution: polygon centres, edge midpoints and the cone point."""
        count = sum(1 for p, (target, _) in enumerate(self.rho) if target == p)
        seen = set()
        for (p, k), partner in self.gluings.items():
            if (p, k) in seen:
                continue
            seen.add((p, k))
            seen.add(partner)
            if self.rho_edge(p, k) == partner:
                count += 1
        classes = self.vertex_classes()
        # the involution permutes cone points; a single class is fixed
        return count + (1 if len(classes) == 1 else 0)

    def rho_edge(self, p: int, k: int) -> Edge:
        target, c = self.rho[p]
        a, b = self.edge(p, k)
        ra, rb = vsub(c, a), vsub(c, b)
        tpoly = self.polygons[target]
        n = len(tpoly)
        for j in range(n):
            if tpoly[j] == ra and tpoly[(j + 1) % n] == rb:
                return (target, j)
        raise SurfaceError(f"involution does not map edge {(p, k)} onto an edge")

    # -- transformations -----------------------------------------------------

    def transform(self, m: tuple[tuple[QuadNum, QuadNum], tuple[QuadNum, QuadNum]]) -> TranslationSurface:
        """Image under the linear map ``m`` (rows), which must have positive determinant."""
        (a, b), (c, d) = m
        if qsign(a * d - b * c) <= 0:
            raise SurfaceError("linear map must preserve orientation")

        def f(v: Vec) -> Vec:
            return (a * v[0] + b * v[1], c * v[0] + d * v[1])

        polys = tuple(tuple(f(v) for v in poly) for poly in self.polygons)
        rho = tuple((t, f(cv)) for t, cv in self.rho)
        return TranslationSurface(self.disc, polys, self.gluings, rho, self.model, self.label)

    def translate_polygons(self, shifts: list[Vec]) -> TranslationSurface:
        """Move each polygon independently; the involution centres are adjusted to match."""
        polys = tuple(tuple(vadd(v, s) for v in poly) for poly, s in zip(self.polygons, shifts))
        rho = tuple((t, vadd(vadd(cv, s), shifts[t])) for (t, cv), s in zip(self.rho, shifts))
        return TranslationSurface(self.disc, polys, self.gluings, rho, self.model, self.label)

    # -- checks --------------------------------------------------------------

    def check(self) -> None:
        """Raise `SurfaceError` unless every structural invariant holds."""
        for p, poly in enumerate(self.polygons):
            n = len(poly)
            for i in range(n):
                a, b = self.corner_sector(p, i)
                turn = qsign(cross(a, b))
                if turn < 0 or (turn == 0 and qsign(dot(a, b)) >= 0):
                    raise SurfaceError(f"polygon {p} is not strictly convex counterclockwise at vertex {i}")
        for e, e2 in self.gluings.items():
            if self.gluings.get(e2) != e or e2 == e:
                raise SurfaceError(f"gluing of {e} is not an involution without fixed edges")
            u, v = self.edge_vector(*e), self.edge_vector(*e2)
            if u[0] + v[0] != 0 or u[1] + v[1] != 0:
                raise SurfaceError(f"edges {e} and {e2} are not opposite")
        if set(self.gluings) != set(self.edges()):
            raise SurfaceError("gluings are not a perfect matching of the edges")
        if len(self.vertex_classes()) != 1:
            raise SurfaceError("more than one cone point")
        if self.cone_angle_multiple() != 5:
            raise SurfaceError(f"cone angle is {self.cone_angle_multiple()} * 2pi, expected 10pi")
        for p, (target, c) in enumerate(self.rho):
            if self.rho[target][0] != p or self.rho[target][1] != c:
                raise SurfaceError("involution is not an involution")
            image = {vsub(c, v) for v in self.polygons[p]}
            if image != set(self.polygons[target]):
                raise SurfaceError(f"involution does not map polygon {p} onto polygon {target}")
        for e, e2 in self.gluings.items():
            if self.gluings[self.rho_edge(*e)] != self.rho_edge(*e2):
                raise SurfaceError("involution does not respect the gluings")
        if self.fixed_point_count() != 4:
            raise SurfaceError(f"involution has {self.fixed_point_count()} fixed points, expected 4")

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        def num(x: QuadNum) -> list[str]:
            return [str(x.a), str(x.b)]

        data = {
            "disc": self.disc,
            "model": self.model,
            "label": self.label,
            "polygons": [[[num(x), num(y)] for x, y in poly] for poly in self.polygons],
            "gluings": sorted([list(a), list(b)] for a, b in self.gluings.items()),
            "rho": [[t, [num(c[0]), num(c[1])]] for t, c in self.rho],
        }
        return json.dumps(data, sort_keys=True)


# -- canonical layouts ---------------------------------------------------------


def _glue(pairs: list[tuple[Edge, Edge]]) -> dict[Edge, Edge]:
    g: dict[Edge, Edge] = {}
    for a, b in pairs:
        g[a] = b
        g[b] = a
    return g


def _layout_aplus(w, h, t, L, zero) -> tuple[list, dict, list]:
    c0 = [(zero, zero), (L, zero), (L, L), (zero, L)]
    c1 = [(L - w, L), (zero, L), (L, L), (L + t, L + h), (t + zero, L + h), (L - w + t, L + h)]
    center = (L, L)
    c2 = [vsub(center, v) for v in c1]
    gl = _glue([
        ((0, 1), (0, 3)),  # sides of the fixed square
        ((0, 2), (1, 1)),  # top of the square, under the first cylinder
        ((0, 0), (2, 1)),  # bottom of the square, over the second cylinder
        ((1, 0), (1, 4)),  # self-glued piece of the first cylinder
        ((1, 2), (1, 5)),
        ((1, 3), (2, 3)),  # the piece shared by the swapped cylinders
        ((2, 0), (2, 4)),
        ((2, 2), (2, 5)),
    ])
    rho = [(0, center), (2, center), (1, center)]
    return [c0, c1, c2], gl, rho


def _layout_aminus(w, h, t, L, zero) -> tuple[list, dict, list]:
    s = L / 2
    c0 = [
        (s, zero), (2 * s, zero), (w + zero, zero), (w + s, zero),
        (w + s + t, h + zero), (w + t + zero, h + zero), (2 * s + t, h + zero), (s + t, h + zero),
    ]
    c1 = [(w + t + zero, h + zero), (w + t + s, h + zero), (w + t + s, h + s), (w + t + zero, h + s)]
    c2 = [(s, -s), (2 * s, -s), (2 * s, zero), (s, zero)]
    gl = _glue([
        ((0, 1), (0, 5)),  # self-glued piece of the fixed cylinder
        ((0, 3), (0, 7)),
        ((1, 0), (0, 4)),
        ((1, 2), (0, 2)),
        ((1, 1), (1, 3)),
        ((2, 0), (0, 6)),
        ((2, 2), (0, 0)),
        ((2, 1), (2, 3)),
    ])
    center = (2 * s + w + t, h + zero)
    rho = [(0, center), (2, center), (1, center)]
    return [c0, c1, c2], gl, rho


def _layout_b(w, h, t, L, zero) -> tuple[list, dict, list]:
    s = L / 2
    a = w - s
    c0 = [(zero, zero), (w - s, zero), (w + zero, zero), (w + t + zero, h + zero), (t + s, h + zero), (t + zero, h + zero)]
    c1 = [(t + zero, h + zero), (t + s, h + zero), (t + s, h + s), (t + a, h + s), (t + zero, h + s)]
    c2 = [(w - s, -s), (s, -s), (w + zero, -s), (w + zero, zero), (w - s, zero)]
    gl = _glue([
        ((0, 2), (0, 5)),
        ((0, 0), (1, 3)),
        ((0, 4), (1, 0)),
        ((0, 1), (2, 3)),
        ((0, 3), (2, 1)),
        ((1, 2), (2, 0)),
        ((1, 1), (1, 4)),
        ((2, 2), (2, 4)),
    ])
    center = (w + t + zero, h + zero)
    rho = [(0, center), (2, center), (1, center)]
    return [c0, c1, c2], gl, rho


def normalize_model(model: str) -> str:
    try:
        return _MODEL_ALIASES[model]
    except KeyError:
        raise SurfaceError(f"unknown model {model!r}; expected Aplus, Aminus or B") from None


def build_surface(proto: Prototype, model: str, check: bool = True) -> TranslationSurface:
    """Canonical polygon realization of a genus-3 prototype in model A+, A- or B.

    A+: fixed square of side lambda and two swapped cylinders with lattice
    Z(w,0) + Z(t,h).  A- and B: fixed cylinder with lattice Z(w,0) + Z(t,h)
    and two swapped squares of side lambda/2.
    """
    model = normalize_model(model)
    if proto.genus != GENUS3:
        raise SurfaceError("polygon models are implemented for genus 3 only")
    want = MODEL_B if model == MODEL_MODEL_B else MODEL_A
    validate(Prototype(proto.w, proto.h, proto.t, proto.e, proto.disc, GENUS3, want))
    D = proto.disc
    zero = QuadNum(0, 0, D)
    L = lam(proto)
    w, h, t = (QuadNum(x, 0, D) for x in (proto.w, proto.h, proto.t))
    layout = {MODEL_APLUS: _layout_aplus, MODEL_AMINUS: _layout_aminus, MODEL_MODEL_B: _layout_b}[model]
    polys, gl, rho = layout(w, h, t, L, zero)
    surf = TranslationSurface(
        D,
        tuple(tuple(p) for p in polys),
        gl,
        tuple(rho),
        model,
        f"{proto} {model} D={D}",
    )
    if check:
        surf.check()
    return surf


def model_area(proto: Prototype, model: str) -> QuadNum:
    """Closed-form area: lambda^2 + 2wh for A+, lambda^2/2 + wh for A- and B."""
    model = normalize_model(model)
    L = lam(proto)
    if model == MODEL_APLUS:
        return L * L + 2 * proto.w * proto.h
    return L * L / 2 + proto.w * proto.h


def float_vec(v: Vec) -> tuple[float, float]:
    return (float(v[0]), float(v[1]))


def angle_of(v: Vec) -> float:
    x, y = float_vec(v)
    return math.atan2(y, x)
