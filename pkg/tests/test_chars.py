from __future__ import annotations

import pytest

from endoscope.chars import (
    AddChar,
    CharError,
    MultChar,
    U1Char,
    enumerate_characters,
    is_conjugate_self_dual,
    omega_from_u1,
    parse_char,
    u1_from_omega,
)
from endoscope.gf import FqElem, make_tower, unit_circle
from endoscope.sums import value_ring


def test_add_char_values():
    tw = make_tower(3)
    psi = AddChar(tw.base, 1)
    R = value_ring(tw)
    assert psi.eval(FqElem(tw.base, 0), R) == R.one()
    assert psi.eval(FqElem(tw.base, 1), R) == R.root_of_unity(R.M // 3)


def test_trivial_mult_char():
    tw = make_tower(5)
    chi = MultChar(tw.ext, 0)
    R = value_ring(tw)
    assert all(chi.eval(FqElem(tw.ext, c), R) == R.one() for c in range(1, tw.ext.q))


def test_enumeration_counts():
    tw = make_tower(3)
    assert len(enumerate_characters(tw.base)) == 2
    assert len(enumerate_characters(tw)) == 4
    assert len(enumerate_characters(tw.ext)) == 8


def test_conjugate_self_duality():
    tw = make_tower(3)
    assert is_conjugate_self_dual(tw, MultChar(tw.ext, 0))
    assert not is_conjugate_self_dual(tw, MultChar(tw.ext, 1))
    for wp in enumerate_characters(tw):
        assert is_conjugate_self_dual(tw, omega_from_u1(tw, wp))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_omega_at_eps_equals_omega_prime_at_minus_one(q):
    tw = make_tower(q)
    R = value_ring(tw)
    minus_one = FqElem(tw.ext, tw.ext.from_int(-1))
    for wp in enumerate_characters(tw):
        omega = omega_from_u1(tw, wp)
        assert omega.eval(tw.eps, R) == wp.eval(minus_one, R)


def test_dictionary_round_trip():
    tw = make_tower(5)
    for wp in enumerate_characters(tw):
        assert u1_from_omega(tw, omega_from_u1(tw, wp)) == wp
    assert omega_from_u1(tw, U1Char(tw, 0)).is_trivial


def test_order_four_u1_character_q3():
    tw = make_tower(3)
    R = value_ring(tw)
    omega = omega_from_u1(tw, U1Char(tw, 1))
    values = {omega.eval(FqElem(tw.ext, c), R) for c in range(1, 9)}
    assert len(values) == 4
    assert all(omega.eval(tw.embed(FqElem(tw.base, c)), R) == R.one() for c in (1, 2))


def test_omega_restricted_to_u1():
    tw = make_tower(3)
    R = value_ring(tw)
    for wp in enumerate_characters(tw):
        omega = omega_from_u1(tw, wp)
        for x in unit_circle(tw):
            # ω(x) = ω′(x/c(x)) = ω′(x²) on U(1)
            assert omega.eval(x, R) == wp.eval(x * x, R)


def test_parse_char():
    tw = make_tower(3)
    assert parse_char(tw, "add:b=1") == AddChar(tw.base, 1)
    assert parse_char(tw, "mul:E:j=3") == MultChar(tw.ext, 3)
    assert parse_char(tw, "mul:U1:j=2") == U1Char(tw, 2)
    with pytest.raises(CharError):
        parse_char(tw, "mul:Q:j=1")
