"""Exact arithmetic in real quadratic fields and small integer linear algebra.

`QuadNum` represents ``a + b*sqrt(D)`` with rational ``a`` and ``b``.  Signs
and comparisons are decided by exact case analysis, never by floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd, isqrt
from numbers import Rational
from typing import Iterable, Union

from gmpy2 import mpq

IntMat2 = tuple[tuple[int, int], tuple[int, int]]
Scalar = Union[int, Fraction, "QuadNum"]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@lru_cache(maxsize=None)
def _square_root(disc: int) -> int | None:
    return isqrt(disc) if is_square(disc) else None


_MPQ_ZERO = mpq(0)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@total_ordering
class QuadNum:
    """Immutable element ``a + b*sqrt(disc)`` of Q(sqrt(disc)).

    A perfect-square ``disc`` is folded at construction so that ``b == 0``.
    Values with ``b == 0`` are plain rationals and combine with any field.
    Coefficients are stored as gmpy2 rationals for speed; `to_fraction`
    returns a standard `Fraction`.
    """

    __slots__ = ("a", "b", "disc")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0, disc: int = 0):
        if disc < 0:
            raise ValueError("discriminant must be nonnegative")
        a = mpq(a)
        b = mpq(b)
        if b:
            r = _square_root(disc)
            if r is not None:
                a += b * r
                b = _MPQ_ZERO
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "disc", disc)

    def __setattr__(self, name, value):
        raise AttributeError("QuadNum is immutable")

    @classmethod
    def sqrt(cls, disc: int) -> QuadNum:
        return cls(0, 1, disc)

    # -- coercion -----------------------------------------------------

    def _coerce(self, other) -> QuadNum | None:
        if type(other) is QuadNum:
            if other.disc != self.disc and self.b and other.b:
                raise ValueError(f"mixed fields: sqrt({self.disc}) and sqrt({other.disc})")
            return other
        if isinstance(other, (int, Rational)):
            return _new(mpq(other), _MPQ_ZERO, self.disc)
        return None

    # -- arithmetic ---------------------------------------------------
    # Results of canonical operands are canonical, so `_new` skips folding.

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _new(self.a + o.a, self.b + o.b, self.disc if self.b else o.disc)

    __radd__ = __add__

    def __neg__(self):
        return _new(-self.a, -self.b, self.disc)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _new(self.a - o.a, self.b - o.b, self.disc if self.b else o.disc)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.disc if self.b else o.disc
        if not self.b:
            return _new(self.a * o.a, self.a * o.b, d)
        if not o.b:
            return _new(self.a * o.a, self.b * o.a, d)
        return _new(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadNum:
        return _new(self.a, -self.b, self.disc)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.disc

    def inverse(self) -> QuadNum:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadNum division by zero")
        return _new(self.a / n, -self.b / n, self.disc)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.b:
            if o.a == 0:
                raise ZeroDivisionError("QuadNum division by zero")
            return _new(self.a / o.a, self.b / o.a, self.disc)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        out = _new(mpq(1), _MPQ_ZERO, self.disc)
        for _ in range(abs(n)):
            out = out * base
        return out

    # -- order --------------------------------------------------------

    def sign(self) -> int:
        return qsign(self)

    def __eq__(self, other):
        if type(other) is QuadNum:
            return self.a == other.a and self.b == other.b
        o = self._coerce(other) if not isinstance(other, float) else None
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _qsign(self.a - o.a, self.b - o.b, self.disc if self.b else o.disc) < 0

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.disc))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __abs__(self):
        return -self if qsign(self) < 0 else self

    # -- conversions --------------------------------------------------

    def is_rational(self) -> bool:
        return not self.b

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return Fraction(int(self.a.numerator), int(self.a.denominator))

    def __float__(self):
        return float(self.a) + float(self.b) * self.disc ** 0.5

    def __repr__(self):
        if not self.b:
            return f"QuadNum({self.a})"
        return f"QuadNum({self.a} + {self.b}*sqrt({self.disc}))"

    def __str__(self):
        if not self.b:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.disc})"


def _qsign(a, b, disc: int) -> int:
    sa, sb = _sign(a), _sign(b)
    if sb == 0 or disc == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the larger of a^2 and b^2 D wins
    lhs, rhs = a * a, b * b * disc
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def qsign(x: QuadNum) -> int:
    """Sign of ``a + b*sqrt(D)`` under the embedding with sqrt(D) >= 0."""
    return _qsign(x.a, x.b, x.disc)


_object_new = object.__new__
_object_set = object.__setattr__


def _new(a, b, disc: int) -> QuadNum:
    """Construct without conversion or folding; arguments must already be canonical."""
    q = _object_new(QuadNum)
    _object_set(q, "a", a)
    _object_set(q, "b", b)
    _object_set(q, "disc", disc)
    return q


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def det2(m: IntMat2) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def matmul2(m: IntMat2, n: IntMat2) -> IntMat2:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def col_hnf(m: IntMat2) -> tuple[IntMat2, IntMat2]:
    """Column Hermite normal form of a nonsingular 2x2 integer matrix.

    Returns ``(hnf, u)`` with ``det(u) == 1``, ``hnf = [[x, y], [0, g]]``,
    ``g = gcd`` of the bottom row of ``m`` and ``x > 0``.  When
    ``det(m) > 0`` the identity ``m @ u == hnf`` holds; when ``det(m) < 0``
    the top row is negated as well, i.e. ``diag(-1, 1) @ m @ u == hnf``.
    The top-right entry is reduced into ``[0, x)`` for determinism.
    """
    (a, b), (c, d) = m
    det = a * d - b * c
    if det == 0:
        raise ValueError("degenerate lattice")
    g, x, y = egcd(c, d)
    u = ((d // g, x), (-c // g, y))
    top_left = det // g
    top_right = a * x + b * y
    if top_left < 0:
        top_left, top_right = -top_left, -top_right
    k = top_right // top_left
    top_right -= k * top_left
    # column 2 -= k * column 1 keeps det(u) == 1
    u = ((u[0][0], u[0][1] - k * u[0][0]), (u[1][0], u[1][1] - k * u[1][0]))
    return ((top_left, top_right), (0, g)), u


def lattice_basis(vectors: Iterable[tuple[Fraction, Fraction]]) -> tuple[
    tuple[Fraction, Fraction], tuple[Fraction, Fraction]
]:
    """Upper-triangular basis ``((x, 0), (s, y))`` of the rational lattice spanned by ``vectors``.

    The lattice must have rank 2.  ``x > 0``, ``y > 0`` and ``0 <= s < x``.
    """
    vecs = [(Fraction(u), Fraction(v)) for u, v in vectors]
    den = 1
    for u, v in vecs:
        den = den * u.denominator // gcd(den, u.denominator)
        den = den * v.denominator // gcd(den, v.denominator)
    cols = [(int(u * den), int(v * den)) for u, v in vecs]
    # fold all second coordinates into one column, then reduce the rest
    pivot = (0, 0)
    horiz = 0
    for u, v in cols:
        if v == 0:
            horiz = gcd(horiz, u)
            continue
        if pivot[1] == 0:
            pivot = (u, v)
            continue
        g, x, y = egcd(pivot[1], v)
        new_pivot = (x * pivot[0] + y * u, g)
        leftover = (pivot[0] * (v // g) - u * (pivot[1] // g), 0)
        pivot = new_pivot
        horiz = gcd(horiz, leftover[0])
    if pivot[1] == 0 or horiz == 0:
        raise ValueError("degenerate lattice")
    if pivot[1] < 0:
        pivot = (-pivot[0], -pivot[1])
    s = pivot[0] % horiz
    return (Fraction(horiz, den), Fraction(0)), (Fraction(s, den), Fraction(pivot[1], den))
