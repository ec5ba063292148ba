"""Butterfly moves on prototypes, reduced classes and complete prototypes.

A move ``B_q`` (``q`` a positive integer or ``INF``) sends a prototype
``(w, h, t, e)`` to ``(w', h', t', e')`` with

    e' = -e - 4qh,  h' = gcd(qh, w + qt)     (finite q)
    e' = -e - 4h,   h' = gcd(t, h)           (q = INF)

and ``w'`` fixed by the discriminant.  The twist ``t'`` is read off the
column Hermite form of the off-diagonal block of the generator matrix in the
new basis: ``col_hnf(B) = [[w', b], [0, h']]`` and ``t' = b mod gcd(w', h')``.
"""

from __future__ import annotations

import math
from math import gcd
from typing import Union

from .exactnum import col_hnf
from .prototypes import (
    GENUS3,
    CompletePrototype,
    Prototype,
    ReducedClass,
    is_reduced_class,
    reduced_width,
    validate,
)

INF = math.inf
MoveLabel = Union[int, float]


class InadmissibleMove(ValueError):
    pass


class ConsistencyError(AssertionError):
    pass


def label(q: MoveLabel) -> str:
    return "Binf" if q == INF else f"B{q}"


def parse_label(text: str) -> MoveLabel:
    s = text.strip()
    if s.startswith("B"):
        s = s[1:]
    if s in ("inf", "∞", "oo"):
        return INF
    q = int(s)
    if q < 1:
        raise ValueError(f"move parameter must be >= 1 or inf, got {q}")
    return q


def _check_label(q: MoveLabel) -> None:
    if q != INF and (not isinstance(q, int) or q < 1):
        raise ValueError(f"move parameter must be a positive integer or INF, got {q!r}")


def admissible(h: int, e: int, D: int, q: MoveLabel) -> bool:
    if q == INF or q == 1:
        return True
    x = e + 4 * q * h
    return x < 0 or x * x < D


def is_admissible(p: Prototype, q: MoveLabel) -> bool:
    _check_label(q)
    return admissible(p.h, p.e, p.disc, q)


def max_finite_q(h: int, e: int, D: int) -> int:
    """Largest finite ``q`` with ``e + 4qh < sqrt(D)``; at least 1 since ``B_1`` is always admissible."""
    lo, hi = 1, 2
    while admissible(h, e, D, hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if admissible(h, e, D, mid):
            lo = mid
        else:
            hi = mid
    return lo


def move_block(w: int, h: int, t: int, e: int, q: MoveLabel, genus: int = GENUS3) -> tuple[tuple[int, int], tuple[int, int]]:
    """Off-diagonal 2x2 block of the conjugated generator matrix."""
    c = 1 if genus == GENUS3 else 2
    if q == INF:
        return ((0, -c * e + w - 2 * c * h), (-h, t))
    return ((h, -c * e - t - 2 * c * q * h), (-q * h, w + q * t))


def apply_tuple(w: int, h: int, t: int, e: int, D: int, q: MoveLabel, genus: int = GENUS3) -> tuple[int, int, int, int]:
    """Fast path of `apply` on raw integers; assumes admissibility."""
    k = 8 if genus == GENUS3 else 4
    if q == INF:
        e2 = -e - 4 * h
        h2 = gcd(t, h)
    else:
        e2 = -e - 4 * q * h
        h2 = gcd(q * h, w + q * t)
    num = D - e2 * e2
    if num <= 0 or num % (k * h2):
        raise ConsistencyError(f"no integral w' for D={D}, e'={e2}, h'={h2}")
    w2 = num // (k * h2)
    (top_left, b), (_, g) = col_hnf(move_block(w, h, t, e, q, genus))[0]
    if top_left != w2 or g != h2:
        raise ConsistencyError(
            f"block normal form [[{top_left}, {b}], [0, {g}]] disagrees with w'={w2}, h'={h2}"
        )
    return (w2, h2, b % gcd(w2, h2), e2)


def apply(p: Prototype, q: MoveLabel) -> Prototype:
    """Image of a model-A prototype under ``B_q``."""
    if not is_admissible(p, q):
        raise InadmissibleMove(f"inadmissible: {label(q)} on {p} (D={p.disc})")
    w, h, t, e = apply_tuple(p.w, p.h, p.t, p.e, p.disc, q, p.genus)
    return validate(Prototype(w, h, t, e, p.disc, p.genus, p.model))


def apply_complete(cp: CompletePrototype, q: MoveLabel) -> CompletePrototype:
    """Butterfly move on a complete prototype; the sign flips."""
    return CompletePrototype(apply(cp.proto, q), -cp.eps)


def apply_chain(p: Prototype, qs: list[MoveLabel]) -> list[Prototype]:
    out = [p]
    for q in qs:
        out.append(apply(out[-1], q))
    return out


# -- reduced classes -----------------------------------------------------


def reduced_move(r: ReducedClass, q: MoveLabel) -> ReducedClass | None:
    """``e -> -e - 4q`` when the image is admissible and ``gcd(w, q) = 1``."""
    _check_label(q)
    if q == INF:
        e2 = -r.e - 4
        return ReducedClass(e2, r.disc, r.genus) if is_reduced_class(e2, r.disc, r.genus) else None
    e2 = -r.e - 4 * q
    if not is_reduced_class(e2, r.disc, r.genus):
        return None
    if gcd(reduced_width(r.e, r.disc, r.genus), q) != 1:
        return None
    return ReducedClass(e2, r.disc, r.genus)


def _is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def f_move(r: ReducedClass, signed_q: int) -> ReducedClass | None:
    """Strategy move ``F_q``: ``e + 4(q - 1)`` for ``q > 0``, ``e - 4(|q| - 1)`` for ``q < 0``.

    Realized as ``B_q`` followed by ``B_inf`` (resp. ``B_inf`` then ``B_|q|``).
    """
    q = abs(signed_q)
    if not _is_odd_prime(q):
        raise ValueError(f"|q| must be an odd prime, got {signed_q}")
    first, second = (q, INF) if signed_q > 0 else (INF, q)
    mid = reduced_move(r, first)
    if mid is None:
        return None
    return reduced_move(mid, second)


def apply_strategy(r: ReducedClass, strategy: list[int]) -> ReducedClass | None:
    cur: ReducedClass | None = r
    for q in strategy:
        if cur is None:
            return None
        cur = f_move(cur, q)
    return cur


# -- generator matrices and the mod-2 invariant ---------------------------


def generator_matrix(cp: CompletePrototype) -> list[list[int]]:
    """Normalized generator of the quadratic order in the cylinder basis.

    Columns are the images of the basis vectors ``(a1, b1, a2, b2)``.
    """
    w, h, t, e = cp.proto.key
    if cp.eps > 0:
        return [[e, 0, 2 * w, 2 * t], [0, e, 0, 2 * h], [h, -t, 0, 0], [0, w, 0, 0]]
    return [[e, 0, w, t], [0, e, 0, h], [2 * h, -2 * t, 0, 0], [0, 2 * w, 0, 0]]


def intersection_form(eps: int) -> list[list[int]]:
    """``diag(J, 2J)`` for sign ``+`` and ``diag(2J, J)`` for sign ``-``."""
    a, b = (1, 2) if eps > 0 else (2, 1)
    return [[0, a, 0, 0], [-a, 0, 0, 0], [0, 0, 0, b], [0, 0, -b, 0]]


def _span_mod2(columns: list[list[int]]) -> list[int]:
    """Row-reduced basis (as bitmasks) of the GF(2) span of the columns."""
    basis: list[int] = []
    for col in columns:
        v = sum((x & 1) << i for i, x in enumerate(col))
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return basis


def mod2_invariant(cp: CompletePrototype) -> str:
    """``"zero"`` if the form vanishes on the image of the generator mod 2, else ``"nonzero"``."""
    if cp.proto.disc % 2 == 0:
        raise ValueError("invariant defined only for odd discriminants")
    T = generator_matrix(cp)
    cols = [[T[i][j] for i in range(4)] for j in range(4)]
    omega = intersection_form(cp.eps)
    image = _span_mod2(cols)
    for u in image:
        for v in image:
            s = 0
            for i in range(4):
                for j in range(4):
                    s += ((u >> i) & 1) * omega[i][j] * ((v >> j) & 1)
            if s % 2:
                return "nonzero"
    return "zero"
