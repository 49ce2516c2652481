"""Multiplication table, parsing, and algebra axioms."""

import itertools

import pytest

from borderfloer.algebra import (
    I0, I1, R1, R2, R3, R12, R23, R123,
    CHORDS, IDEMPOTENTS, UNIT, ZERO,
    basis_elements, chord_idempotents, el, format_chord, format_element,
    idempotent_of_side, mul, mul_basis, parse_chord, parse_element,
    seq_idempotents, seq_is_composable,
)

# Frozen nonzero part of the basis product table, (a, b) -> c.
NONZERO_PRODUCTS = {
    (I0, I0): I0,
    (I1, I1): I1,
    (R1, R2): R12,
    (R2, R3): R23,
    (R1, R23): R123,
    (R12, R3): R123,
    # left idempotent absorption
    (I0, R1): R1, (I1, R2): R2, (I0, R3): R3,
    (I0, R12): R12, (I1, R23): R23, (I0, R123): R123,
    # right idempotent absorption
    (R1, I1): R1, (R2, I0): R2, (R3, I1): R3,
    (R12, I0): R12, (R23, I1): R23, (R123, I1): R123,
}


def test_basis_product_table_matches_frozen_table():
    for a in range(8):
        for b in range(8):
            expected = NONZERO_PRODUCTS.get((a, b))
            got = mul_basis(a, b)
            if expected is None:
                assert got == 0, (a, b)
            else:
                assert got == el(expected), (a, b)


def test_specific_products():
    assert mul(el(R1), el(R2)) == el(R12)
    assert mul(el(R2), el(R3)) == el(R23)
    assert mul(el(R1), el(R23)) == el(R123)
    assert mul(el(R12), el(R3)) == el(R123)
    assert mul(el(R2), el(R1)) == ZERO
    assert mul(el(R3), el(R2)) == ZERO
    assert mul(el(R1), el(R3)) == ZERO
    assert mul(el(R2), el(R123)) == ZERO
    assert mul(el(R12), el(R12)) == ZERO
    assert mul(el(R123), el(R123)) == ZERO


def test_idempotents_orthogonal():
    assert mul(el(I0), el(I0)) == el(I0)
    assert mul(el(I1), el(I1)) == el(I1)
    assert mul(el(I0), el(I1)) == ZERO
    assert mul(el(I1), el(I0)) == ZERO


def test_unit_acts_as_identity():
    for x in range(256):
        assert mul(UNIT, x) == x
        assert mul(x, UNIT) == x


def test_associativity_all_basis_triples():
    for a, b, c in itertools.product(range(8), repeat=3):
        left = mul(mul_basis(a, b), el(c))
        right = mul(el(a), mul_basis(b, c))
        assert left == right, (a, b, c)


def test_bilinearity_on_random_masks():
    import random

    rng = random.Random(7)
    for _ in range(200):
        x = rng.randrange(256)
        y = rng.randrange(256)
        z = rng.randrange(256)
        assert mul(x ^ y, z) == mul(x, z) ^ mul(y, z)
        assert mul(z, x ^ y) == mul(z, x) ^ mul(z, y)


def test_chord_idempotents():
    assert chord_idempotents(R1) == (I0, I1)
    assert chord_idempotents(R2) == (I1, I0)
    assert chord_idempotents(R3) == (I0, I1)
    assert chord_idempotents(R12) == (I0, I0)
    assert chord_idempotents(R23) == (I1, I1)
    assert chord_idempotents(R123) == (I0, I1)


def test_idempotent_absorption_matches_chord_idempotents():
    for c in CHORDS:
        left, right = chord_idempotents(c)
        for i in IDEMPOTENTS:
            assert mul(el(i), el(c)) == (el(c) if i == left else ZERO)
            assert mul(el(c), el(i)) == (el(c) if i == right else ZERO)


def test_idempotent_of_side():
    assert idempotent_of_side(R2, left=True) == I1
    assert idempotent_of_side(R2, left=False) == I0
    assert idempotent_of_side(I0, left=True) == I0
    assert idempotent_of_side(I0, left=False) == I0


def test_parse_element():
    assert parse_element("0") == ZERO
    assert parse_element("1") == UNIT
    assert parse_element("i0") == el(I0)
    assert parse_element("r123") == el(R123)
    assert parse_element("r1+r3") == el(R1) | el(R3)
    assert parse_element("i0+i1") == UNIT
    assert parse_element("r1 + r1") == ZERO  # F2 cancellation
    with pytest.raises(ValueError):
        parse_element("r4")


def test_format_element_round_trip():
    for x in range(256):
        assert parse_element(format_element(x)) == x


def test_parse_chord():
    assert parse_chord("r23") == R23
    with pytest.raises(ValueError):
        parse_chord("i0")
    with pytest.raises(ValueError):
        parse_chord("bogus")
    assert format_chord(R123) == "r123"


def test_sequence_composability():
    assert seq_is_composable([R1, R2, R3])
    assert seq_is_composable([R3, R2, R1])  # r3.r2 inner idempotents match
    assert not seq_is_composable([R1, R1])
    assert not seq_is_composable([R2, R23])
    assert seq_idempotents([R1, R2]) == (I0, I0)
    assert seq_idempotents([R3, R2, R1]) == (I0, I1)
    assert seq_idempotents([]) is None
    with pytest.raises(ValueError):
        seq_idempotents([R1, R1])


def test_basis_elements():
    assert basis_elements(ZERO) == ()
    assert basis_elements(el(R1) | el(R23)) == (R1, R23)
