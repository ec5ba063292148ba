from math import gcd, isqrt, sqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prymeigen.prototypes import (
    GENUS3,
    GENUS4,
    MODEL_A,
    MODEL_B,
    Prototype,
    ReducedClass,
    enumerate_complete,
    enumerate_genus2,
    enumerate_reduced,
    enumerate_square_cusp,
    enumerate_tuples,
    is_valid,
    reduced_to_prototype,
    square_cusp_count,
    validate,
    violation,
)


def brute_force(D: int, genus: int, model: str) -> list[tuple[int, int, int, int]]:
    """Direct search over the defining inequalities, using floats away from the boundary."""
    k = 8 if genus == GENUS3 else 4
    root = sqrt(D)
    out = []
    for e in range(-isqrt(D) - 1, isqrt(D) + 2):
        for w in range(1, D + 1):
            for h in range(1, D + 1):
                if e * e + k * w * h != D:
                    continue
                lam2 = e + root  # 2 lambda
                if genus == GENUS3 and model == MODEL_A:
                    ok = e + 2 * h < w
                elif genus == GENUS3:
                    ok = lam2 / 4 < w < lam2 / 2
                elif model == MODEL_A:
                    ok = w > 2 * (e + 2 * h)
                else:
                    ok = w / 2 < lam2 / 2 < w
                if not ok:
                    continue
                for t in range(gcd(w, h)):
                    if gcd(gcd(w, h), gcd(t, e)) == 1:
                        out.append((w, h, t, e))
    return sorted(out, key=lambda p: (p[3], p[0], p[1], p[2]))


@pytest.mark.parametrize("genus", [GENUS3, GENUS4])
@pytest.mark.parametrize("model", [MODEL_A, MODEL_B])
def test_enumeration_matches_brute_force(genus, model):
    for D in range(5, 90):
        if D % 4 in (0, 1):
            assert enumerate_tuples(D, genus, model) == brute_force(D, genus, model), D


def test_stated_examples():
    assert enumerate_tuples(12, GENUS3, MODEL_A) == [(1, 1, 0, -2)]
    assert enumerate_tuples(8, GENUS3, MODEL_B) == [(1, 1, 0, 0)]
    assert set(enumerate_tuples(48, GENUS3, MODEL_B)) == {(3, 2, 0, 0), (4, 1, 0, 4), (2, 3, 0, 0), (1, 4, 0, -4)}
    assert set(enumerate_tuples(68, GENUS3, MODEL_A)) == {(2, 2, 1, -6), (8, 1, 0, -2), (4, 1, 0, -6), (8, 1, 0, 2), (4, 2, 1, -2)}
    sizes = [len(enumerate_tuples(17, g, m)) for g, m in [(3, "A"), (3, "B"), (4, "A"), (4, "B")]]
    assert sizes == [2, 2, 2, 4]


def test_empty_discriminants():
    for D in (9, 16):
        assert enumerate_tuples(D, GENUS3, MODEL_A) == []
        assert enumerate_tuples(D, GENUS3, MODEL_B) == []
    assert enumerate_tuples(8, GENUS3, MODEL_A) == []
    for D in range(5, 600, 8):
        assert enumerate_tuples(D, GENUS3, MODEL_A) == [] and enumerate_tuples(D, GENUS3, MODEL_B) == []


def test_residue_witness_prototype():
    for D in range(17, 600):
        if D % 8 not in (0, 1, 4):
            continue
        e = {0: 0, 1: -1, 4: -2}[D % 8]
        assert ((D - e * e) // 8, 1, 0, e) in enumerate_tuples(D), D


def test_complete_is_twice_incomplete():
    for D in range(17, 200):
        assert len(enumerate_complete(D)) == 2 * len(enumerate_tuples(D))


@given(st.integers(min_value=5, max_value=400), st.sampled_from([GENUS3, GENUS4]), st.sampled_from([MODEL_A, MODEL_B]))
def test_enumerated_tuples_revalidate(D, genus, model):
    for w, h, t, e in enumerate_tuples(D, genus, model):
        assert is_valid(Prototype(w, h, t, e, D, genus, model))


def test_violation_names_invariant():
    assert violation(Prototype(3, 2, 1, 0, 48, GENUS3, MODEL_B)) == "0 <= t < gcd(w, h)"
    assert violation(Prototype(1, 1, 0, 0, 8)) == "e + 2h < w"
    with pytest.raises(ValueError, match="e \\+ 2h < w"):
        validate(Prototype(1, 1, 0, 0, 8))


def test_reduced_set():
    assert [r.e for r in enumerate_reduced(41)] == [-5, -3, -1, 1]
    assert enumerate_reduced(5) == []
    assert [r.e for r in enumerate_reduced(12)] == [-2]
    assert reduced_to_prototype(ReducedClass(-6, 148)).key == (14, 1, 0, -6)
    assert reduced_to_prototype(ReducedClass(2, 292)).key == (36, 1, 0, 2)
    with pytest.raises(ValueError):
        reduced_to_prototype(ReducedClass(0, 8))


def test_square_cusp_prototypes():
    assert [(s.p, s.q) for s in enumerate_square_cusp(5)] == [(2, 1)]
    assert [(s.p, s.q) for s in enumerate_square_cusp(7)] == [(2, 1), (3, 1), (3, 2)]
    assert enumerate_square_cusp(3) == []
    assert square_cusp_count(24) == 0


def test_genus2_prototypes():
    assert len(enumerate_genus2(8)) == 2
    assert len(enumerate_genus2(17)) == 6
    assert [(p.a, p.b, p.c, p.e) for p in enumerate_genus2(5)] == [(0, 1, 1, -1)]
