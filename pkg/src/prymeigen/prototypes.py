"""Enumeration and validation of prototype families.

Genus 3 (single zero of order 4):
    model A  ``w, h > 0, 0 <= t < gcd(w, h), gcd(w, h, t, e) = 1, D = e^2 + 8wh, e + 2h < w``
    model B  same lattice data with ``(e + sqrt D)/4 < w < (e + sqrt D)/2``

Genus 4 (single zero of order 6) uses ``D = e^2 + 4wh``; model A requires
``w > 2(e + 2h)`` and model B ``w/2 < (e + sqrt D)/2 < w``.

Tuples are plain integer data; ``disc`` is part of the identity so that the
same quadruple under two discriminants never compares equal.
"""

from __future__ import annotations

from math import gcd, isqrt
from typing import Iterator, NamedTuple

from .exactnum import QuadNum, is_square, qsign

GENUS3 = 3
GENUS4 = 4
MODEL_A = "A"
MODEL_B = "B"


class Prototype(NamedTuple):
    w: int
    h: int
    t: int
    e: int
    disc: int
    genus: int = GENUS3
    model: str = MODEL_A

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.w, self.h, self.t, self.e)

    def __str__(self) -> str:
        return f"({self.w},{self.h},{self.t},{self.e})"


class CompletePrototype(NamedTuple):
    proto: Prototype
    eps: int

    def __str__(self) -> str:
        sign = "+" if self.eps > 0 else "-"
        return f"({self.proto.w},{self.proto.h},{self.proto.t},{self.proto.e},{sign})"


class ReducedClass(NamedTuple):
    e: int
    disc: int
    genus: int = GENUS3


class SquareCuspPrototype(NamedTuple):
    p: int
    q: int
    d: int

    @property
    def quadruple(self) -> tuple[int, int, int, int]:
        """The ``(e, p, q, s)`` data: ``e = d - 4p`` and ``s = d - 2p``."""
        return (self.d - 4 * self.p, self.p, self.q, self.d - 2 * self.p)


class Genus2Prototype(NamedTuple):
    a: int
    b: int
    c: int
    e: int
    disc: int


def _scale(genus: int) -> int:
    if genus == GENUS3:
        return 8
    if genus == GENUS4:
        return 4
    raise ValueError(f"unsupported genus {genus}")


def lam(p: Prototype) -> QuadNum:
    """The eigenvalue ``(e + sqrt D)/2`` attached to a prototype."""
    return QuadNum(p.e, 1, p.disc) / 2


# -- predicates ----------------------------------------------------------


def violation(p: Prototype) -> str | None:
    """Name of the first invariant ``p`` violates, or None if it is valid."""
    w, h, t, e, D = p.w, p.h, p.t, p.e, p.disc
    if w <= 0 or h <= 0:
        return "w > 0 and h > 0"
    if not 0 <= t < gcd(w, h):
        return "0 <= t < gcd(w, h)"
    if gcd(gcd(w, h), gcd(t, e)) != 1:
        return "gcd(w, h, t, e) = 1"
    k = _scale(p.genus)
    if D != e * e + k * w * h:
        return f"D = e^2 + {k}wh"
    root = QuadNum(e, 1, D)  # e + sqrt(D) = 2*lambda
    if p.genus == GENUS3:
        if p.model == MODEL_A:
            if not e + 2 * h < w:
                return "e + 2h < w"
        elif p.model == MODEL_B:
            if not (qsign(4 * w - root) > 0 and qsign(root - 2 * w) > 0):
                return "(e + sqrt D)/4 < w < (e + sqrt D)/2"
        else:
            raise ValueError(f"unknown model {p.model!r}")
    else:
        if p.model == MODEL_A:
            if not w > 2 * (e + 2 * h):
                return "w > 2(e + 2h)"
        elif p.model == MODEL_B:
            if not (qsign(root - w) > 0 and qsign(2 * w - root) > 0):
                return "w/2 < (e + sqrt D)/2 < w"
        else:
            raise ValueError(f"unknown model {p.model!r}")
    return None


def is_valid(p: Prototype) -> bool:
    return violation(p) is None


def validate(p: Prototype) -> Prototype:
    v = violation(p)
    if v is not None:
        raise ValueError(f"prototype {p} (D={p.disc}, genus {p.genus}, model {p.model}) violates {v}")
    return p


# -- enumeration ---------------------------------------------------------


def _e_range(D: int, k: int) -> Iterator[int]:
    if D <= 0:
        return
    r = isqrt(D - 1)
    for e in range(-r, r + 1):
        if (D - e * e) % k == 0:
            yield e


def _divisor_pairs(n: int) -> Iterator[tuple[int, int]]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    for w in small + large[::-1]:
        yield w, n // w


def enumerate_tuples(D: int, genus: int = GENUS3, model: str = MODEL_A) -> list[tuple[int, int, int, int]]:
    """Raw ``(w, h, t, e)`` tuples, sorted by ``(e, w, h, t)``."""
    k = _scale(genus)
    out = []
    for e in _e_range(D, k):
        n = (D - e * e) // k
        root = QuadNum(e, 1, D)
        for w, h in _divisor_pairs(n):
            if genus == GENUS3 and model == MODEL_A:
                ok = e + 2 * h < w
            elif genus == GENUS4 and model == MODEL_A:
                ok = w > 2 * (e + 2 * h)
            elif genus == GENUS3 and model == MODEL_B:
                ok = qsign(4 * w - root) > 0 and qsign(root - 2 * w) > 0
            elif genus == GENUS4 and model == MODEL_B:
                ok = qsign(root - w) > 0 and qsign(2 * w - root) > 0
            else:
                raise ValueError(f"unknown model {model!r}")
            if not ok:
                continue
            g = gcd(w, h)
            for t in range(g):
                if gcd(g, gcd(t, e)) == 1:
                    out.append((w, h, t, e))
    out.sort(key=lambda p: (p[3], p[0], p[1], p[2]))
    return out


def enumerate_prototypes(D: int, genus: int = GENUS3, model: str = MODEL_A) -> list[Prototype]:
    """All prototypes of the given family, in lexicographic ``(e, w, h, t)`` order."""
    return [Prototype(w, h, t, e, D, genus, model) for w, h, t, e in enumerate_tuples(D, genus, model)]


def enumerate_complete(D: int) -> list[CompletePrototype]:
    """Genus-3 complete prototypes: every model-A prototype with both signs."""
    out = []
    for p in enumerate_prototypes(D, GENUS3, MODEL_A):
        out.append(CompletePrototype(p, 1))
        out.append(CompletePrototype(p, -1))
    return out


def is_reduced_class(e: int, D: int, genus: int = GENUS3) -> bool:
    if genus == GENUS3:
        residue = (e * e - D) % 8 == 0
    else:
        residue = (e - D) % 2 == 0
    return residue and e * e < D and (e + 4) ** 2 < D


def enumerate_reduced(D: int, genus: int = GENUS3) -> list[ReducedClass]:
    """Admissible ``e`` values of the reduced set, increasing."""
    if D <= 0:
        return []
    r = isqrt(D - 1)
    return [ReducedClass(e, D, genus) for e in range(-r, r + 1) if is_reduced_class(e, D, genus)]


def reduced_width(e: int, D: int, genus: int = GENUS3) -> int:
    k = _scale(genus)
    if (D - e * e) % k:
        raise ValueError(f"e={e} is not congruent to D={D} in genus {genus}")
    return (D - e * e) // k


def reduced_to_prototype(r: ReducedClass) -> Prototype:
    """The reduced prototype ``(w, 1, 0, e)``; raises if it is not a valid model-A prototype."""
    w = reduced_width(r.e, r.disc, r.genus)
    return validate(Prototype(w, 1, 0, r.e, r.disc, r.genus, MODEL_A))


def enumerate_square_cusp(d: int) -> list[SquareCuspPrototype]:
    """Pairs ``0 < q < p < d/2`` with ``gcd(p, q, d) = 1``, ordered by ``(p, q)``."""
    out = []
    for p in range(1, (d + 1) // 2):
        if 2 * p >= d:
            break
        for q in range(1, p):
            if gcd(gcd(p, q), d) == 1:
                out.append(SquareCuspPrototype(p, q, d))
    return out


def square_cusp_count(D: int) -> int:
    if not is_square(D):
        return 0
    return len(enumerate_square_cusp(isqrt(D)))


def enumerate_genus2(D: int) -> list[Genus2Prototype]:
    """Genus-2 cusp prototypes ``(a, b, c, e)``, sorted by ``(e, b, c, a)``.

    Conditions: ``D = e^2 + 4bc``, ``b, c > 0``, ``c + e < b``,
    ``0 <= a < gcd(b, c)``, ``gcd(a, b, c, e) = 1``.
    """
    out = []
    for e in _e_range(D, 4):
        n = (D - e * e) // 4
        for b, c in _divisor_pairs(n):
            if not c + e < b:
                continue
            g = gcd(b, c)
            for a in range(g):
                if gcd(g, gcd(a, e)) == 1:
                    out.append(Genus2Prototype(a, b, c, e, D))
    out.sort(key=lambda p: (p.e, p.b, p.c, p.a))
    return out


def parse_prototype(text: str, D: int, genus: int = GENUS3, model: str = MODEL_A) -> Prototype | CompletePrototype:
    """Parse ``"w,h,t,e"`` or ``"w,h,t,e,+"`` and validate it."""
    parts = [s.strip() for s in text.strip().strip("()").split(",")]
    if len(parts) not in (4, 5):
        raise ValueError(f"prototype literal {text!r} must have 4 or 5 comma-separated fields")
    try:
        w, h, t, e = (int(s) for s in parts[:4])
    except ValueError:
        raise ValueError(f"prototype literal {text!r} has a non-integer field") from None
    p = validate(Prototype(w, h, t, e, D, genus, model))
    if len(parts) == 4:
        return p
    eps = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}.get(parts[4])
    if eps is None:
        raise ValueError(f"sign field {parts[4]!r} must be + or -")
    if genus != GENUS3 or model != MODEL_A:
        raise ValueError("a sign is only meaningful for genus-3 model-A prototypes")
    return CompletePrototype(p, eps)
