from fractions import Fraction
from math import gcd, sqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prymeigen.exactnum import QuadNum, col_hnf, det2, is_square, lattice_basis, matmul2, qsign

DISCS = st.sampled_from([2, 5, 8, 12, 17, 41, 48, 68, 100, 292])
RATS = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@st.composite
def quad(draw, disc=None):
    D = disc if disc is not None else draw(DISCS)
    return QuadNum(draw(RATS), draw(RATS), D)


@st.composite
def quad_triple(draw):
    D = draw(DISCS)
    return draw(quad(D)), draw(quad(D)), draw(quad(D))


def test_sign_examples():
    assert qsign(QuadNum(0, 0, 17)) == 0
    assert qsign(QuadNum(-2, 1, 5)) == 1
    assert qsign(QuadNum(3, -1, 8)) == 1
    assert qsign(QuadNum(-3, 1, 8)) == -1


def test_square_disc_folds():
    x = QuadNum(1, 2, 100)
    assert x.b == 0 and x.a == 21
    assert QuadNum.sqrt(49) == 7


@given(quad_triple())
def test_field_axioms(xyz):
    x, y, z = xyz
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if x:
        assert x * (1 / x) == 1


@given(quad_triple())
def test_order_is_total_and_compatible(xyz):
    x, y, z = xyz
    s = qsign(x - y)
    assert s in (-1, 0, 1)
    assert (x < y) + (x == y) + (x > y) == 1
    assert qsign((x + z) - (y + z)) == s
    if qsign(z) > 0:
        assert qsign(x * z - y * z) == s


@given(quad())
def test_sign_matches_real_embedding(x):
    value = float(x.a) + float(x.b) * sqrt(x.disc)
    if abs(value) > 1e-9:
        assert qsign(x) == (1 if value > 0 else -1)


@given(quad())
def test_conjugate_norm_is_rational(x):
    n = x * x.conjugate()
    assert n.b == 0


def test_rational_round_trip():
    assert QuadNum(Fraction(3, 7), 0, 5).to_fraction() == Fraction(3, 7)
    with pytest.raises(ValueError):
        QuadNum(0, 1, 5).to_fraction()


def test_is_square():
    assert [n for n in range(50) if is_square(n)] == [0, 1, 4, 9, 16, 25, 36, 49]


@pytest.mark.parametrize(
    "m, want",
    [
        (((1, -6), (-2, 36)), ((12, None), (0, 2))),
        (((1, 0), (0, 1)), ((1, 0), (0, 1))),
        (((2, 1), (-2, 3)), ((8, 3), (0, 1))),
    ],
)
def test_col_hnf_examples(m, want):
    hnf, u = col_hnf(m)
    assert hnf[0][0] == want[0][0] and hnf[1] == want[1]
    if want[0][1] is not None:
        assert hnf[0][1] == want[0][1]
    assert det2(u) == 1


INTS = st.integers(min_value=-60, max_value=60)


@given(INTS, INTS, INTS, INTS)
def test_col_hnf_properties(a, b, c, d):
    m = ((a, b), (c, d))
    if det2(m) == 0:
        with pytest.raises(ValueError):
            col_hnf(m)
        return
    hnf, u = col_hnf(m)
    assert det2(u) == 1
    assert hnf[1][0] == 0 and hnf[1][1] == gcd(c, d) and hnf[0][0] > 0
    assert abs(det2(hnf)) == abs(det2(m))
    signed = m if det2(m) > 0 else ((-a, -b), (c, d))
    assert matmul2(signed, u) == hnf


@settings(max_examples=60)
@given(st.lists(st.tuples(RATS, RATS), min_size=2, max_size=6))
def test_lattice_basis_spans_the_same_lattice(vecs):
    vecs = [(Fraction(u), Fraction(v)) for u, v in vecs]
    rank2 = any(u1 * v2 - u2 * v1 for u1, v1 in vecs for u2, v2 in vecs)
    if not rank2:
        with pytest.raises(ValueError):
            lattice_basis(vecs)
        return
    (x, zero), (s, y) = lattice_basis(vecs)
    assert zero == 0 and x > 0 and y > 0 and 0 <= s < x
    # every input vector is an integer combination of the basis
    for u, v in vecs:
        k2 = v / y
        assert k2.denominator == 1
        k1 = (u - k2 * s) / x
        assert k1.denominator == 1
    # and the basis is no finer: its covolume is the gcd of all 2x2 minors
    den = 1
    for u, v in vecs:
        den = den * u.denominator // gcd(den, u.denominator)
        den = den * v.denominator // gcd(den, v.denominator)
    g = 0
    for u1, v1 in vecs:
        for u2, v2 in vecs:
            g = gcd(g, int((u1 * v2 - u2 * v1) * den * den))
    assert x * y * den * den == g


@given(quad(), st.integers(min_value=-4, max_value=6))
def test_integer_powers(x, n):
    if n < 0 and not x:
        with pytest.raises(ZeroDivisionError):
            x**n
        return
    want = QuadNum(1, 0, x.disc)
    for _ in range(abs(n)):
        want = want * x
    assert x**n == (want if n >= 0 else 1 / want)
