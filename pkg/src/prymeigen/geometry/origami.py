"""Square-tiled surfaces (origamis) for perfect-square discriminants.

An origami on ``n`` squares is a pair of permutations of ``{0, ..., n-1}``:
``r[k]`` is the square to the right of ``k`` and ``u[k]`` the square above.
Serialization uses one-line notation on ``{1, ..., n}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from ..exactnum import QuadNum, is_square, lattice_basis, qsign
from ..prototypes import CompletePrototype
from .surface import MODEL_AMINUS, MODEL_APLUS, TranslationSurface, Vec, build_surface, cross, vadd, vsub

Perm = tuple[int, ...]

# Squares are sampled at (i, j) + (1/P, 1/P^2); with P prime and larger than
# every edge coordinate such a point never lies on an edge line.
_P = 10007


class OrigamiError(ValueError):
    pass


def _compose(p: Perm, q: Perm) -> Perm:
    """``p`` after ``q``."""
    return tuple(p[q[i]] for i in range(len(q)))


def _inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycle_type(p: Perm) -> list[int]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        n = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            n += 1
        out.append(n)
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class Origami:
    r: Perm
    u: Perm

    @property
    def n(self) -> int:
        return len(self.r)

    def commutator(self) -> Perm:
        """``r u r^-1 u^-1``; its nontrivial cycles record the cone points."""
        ri, ui = _inverse(self.r), _inverse(self.u)
        return _compose(self.r, _compose(self.u, _compose(ri, ui)))

    def is_connected(self) -> bool:
        seen = {0}
        todo = [0]
        while todo:
            k = todo.pop()
            for j in (self.r[k], self.u[k]):
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == self.n

    def check(self) -> None:
        if sorted(self.r) != list(range(self.n)) or sorted(self.u) != list(range(self.n)):
            raise OrigamiError("r and u must be permutations of the same set")
        if not self.is_connected():
            raise OrigamiError("the permutation group is not transitive")
        nontrivial = [c for c in cycle_type(self.commutator()) if c > 1]
        if nontrivial != [5]:
            raise OrigamiError(f"commutator cycle type {nontrivial} is not a single 5-cycle (one cone point of angle 10pi)")

    def canonical(self) -> tuple[Perm, Perm]:
        """Relabeling-invariant form: the least BFS relabeling over all start squares."""
        best = None
        for start in range(self.n):
            label = {start: 0}
            order = [start]
            q = deque([start])
            while q:
                k = q.popleft()
                for j in (self.r[k], self.u[k]):
                    if j not in label:
                        label[j] = len(order)
                        order.append(j)
                        q.append(j)
            r = tuple(label[self.r[k]] for k in order)
            u = tuple(label[self.u[k]] for k in order)
            if best is None or (r, u) < best:
                best = (r, u)
        return best

    def to_lines(self) -> str:
        """Two one-line permutations on ``1..n``."""
        return "r " + " ".join(str(x + 1) for x in self.r) + "\nu " + " ".join(str(x + 1) for x in self.u)


def is_isomorphic(a: Origami, b: Origami) -> bool:
    return a.n == b.n and a.canonical() == b.canonical()


def act_L(o: Origami) -> Origami:
    """Action of the horizontal shear ``[[1, 1], [0, 1]]``."""
    return Origami(o.r, _compose(o.u, _inverse(o.r)))


def act_R(o: Origami) -> Origami:
    """Action of the vertical shear ``[[1, 0], [1, 1]]``."""
    return Origami(_compose(o.r, _inverse(o.u)), o.u)


def act_word(o: Origami, word: str) -> Origami:
    """Apply a word in ``L`` and ``R`` as a matrix product: the rightmost letter acts first."""
    for ch in reversed(word.replace(" ", "")):
        if ch == "L":
            o = act_L(o)
        elif ch == "R":
            o = act_R(o)
        else:
            raise ValueError(f"unknown generator {ch!r} in word {word!r}")
    return o


def orbit(o: Origami, limit: int = 100000) -> list[tuple[Perm, Perm]]:
    """Canonical forms of the orbit of ``o`` under ``L`` and ``R``, in discovery order."""
    start = o.canonical()
    seen = {start: o}
    order = [start]
    q = deque([o])
    while q:
        cur = q.popleft()
        for nxt in (act_L(cur), act_R(cur)):
            c = nxt.canonical()
            if c not in seen:
                if len(seen) >= limit:
                    raise OrigamiError(f"orbit exceeds {limit} elements")
                seen[c] = nxt
                order.append(c)
                q.append(nxt)
    return order


# -- from surfaces ----------------------------------------------------------------


def _frac(x: QuadNum) -> Fraction:
    return x.to_fraction()


def _inside(poly: tuple[Vec, ...], pt: Vec) -> bool:
    n = len(poly)
    return all(qsign(cross(vsub(poly[(i + 1) % n], poly[i]), vsub(pt, poly[i]))) > 0 for i in range(n))


def _flow(surf: TranslationSurface, p: int, pt: Vec, d: Vec) -> tuple[int, Vec]:
    """Endpoint of the straight segment ``pt -> pt + d`` on the surface; assumes it avoids vertices."""
    remaining = QuadNum(1, 0, surf.disc)
    while True:
        poly = surf.polygons[p]
        n = len(poly)
        best = None
        for k in range(n):
            a, b = poly[k], poly[(k + 1) % n]
            e = vsub(b, a)
            denom = cross(e, d)
            if qsign(denom) >= 0:
                continue
            s = -cross(e, vsub(pt, a)) / denom
            hit = (pt[0] + s * d[0], pt[1] + s * d[1])
            # collinear edges share a line; keep the one whose segment holds the exit point
            along = vsub(hit, a)
            if qsign(along[0] * e[0] + along[1] * e[1]) < 0 or qsign(vsub(hit, b)[0] * e[0] + vsub(hit, b)[1] * e[1]) > 0:
                continue
            if best is None or s < best[0]:
                best = (s, k)
        s, k = best
        if qsign(s - remaining) > 0:
            return p, (pt[0] + remaining * d[0], pt[1] + remaining * d[1])
        exit_pt = (pt[0] + s * d[0], pt[1] + s * d[1])
        tau = surf.translation(p, k)
        p = surf.gluings[(p, k)][0]
        pt = vadd(exit_pt, tau)
        remaining = remaining - s


def surface_to_origami(surf: TranslationSurface) -> Origami:
    """Square tiling of a surface whose periods are already integral."""
    D = surf.disc
    eps = (QuadNum(Fraction(1, _P), 0, D), QuadNum(Fraction(1, _P * _P), 0, D))
    squares: list[tuple[int, Vec]] = []
    for p, poly in enumerate(surf.polygons):
        xs = [_frac(v[0]) for v in poly]
        ys = [_frac(v[1]) for v in poly]
        if any(x.denominator != 1 for x in xs + ys):
            raise OrigamiError("polygon vertices are not integral")
        for i in range(floor(min(xs)), floor(max(xs)) + 1):
            for j in range(floor(min(ys)), floor(max(ys)) + 1):
                pt = (eps[0] + i, eps[1] + j)
                if _inside(poly, pt):
                    squares.append((p, pt))
    index = {sq: k for k, sq in enumerate(squares)}
    one, zero = QuadNum(1, 0, D), QuadNum(0, 0, D)

    def step(k: int, d: Vec) -> int:
        p, pt = squares[k]
        q, dest = _flow(surf, p, pt, d)
        try:
            return index[(q, dest)]
        except KeyError:
            raise OrigamiError("flow landed off the square grid; periods are not integral") from None

    r = tuple(step(k, (one, zero)) for k in range(len(squares)))
    u = tuple(step(k, (zero, one)) for k in range(len(squares)))
    o = Origami(r, u)
    o.check()
    return o


def primitive_normalization(surf: TranslationSurface) -> TranslationSurface:
    """Map the period lattice onto Z^2 by ``[[x, s], [0, y]]^-1`` and put each polygon at the origin."""
    D = surf.disc
    vecs = []
    for p, k in surf.edges():
        v = surf.edge_vector(p, k)
        vecs.append((_frac(v[0]), _frac(v[1])))
    (x, _), (s, y) = lattice_basis(vecs)
    q = lambda f: QuadNum(f, 0, D)  # noqa: E731
    n = ((q(1 / x), q(-s / (x * y))), (q(0), q(1 / y)))
    scaled = surf.transform(n)
    shifts = [vsub((q(0), q(0)), poly[0]) for poly in scaled.polygons]
    return scaled.translate_polygons(shifts)


def to_origami(cp: CompletePrototype) -> Origami:
    """Primitive square-tiled surface of a complete prototype with square discriminant."""
    D = cp.proto.disc
    if not is_square(D):
        raise OrigamiError(f"D={D} is not a perfect square")
    surf = build_surface(cp.proto, MODEL_APLUS if cp.eps > 0 else MODEL_AMINUS)
    return surface_to_origami(primitive_normalization(surf))


def shear_surface(surf: TranslationSurface, word: str) -> TranslationSurface:
    """Apply the matrix product of a word in ``L`` and ``R`` to a surface."""
    D = surf.disc
    one, zero = QuadNum(1, 0, D), QuadNum(0, 0, D)
    mats = {"L": ((one, one), (zero, one)), "R": ((one, zero), (one, one))}
    for ch in reversed(word.replace(" ", "")):
        surf = surf.transform(mats[ch])
    return surf
