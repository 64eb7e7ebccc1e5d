from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endoscope.gf import (
    FieldError,
    FqElem,
    coset_transversal_u1,
    field,
    is_irreducible,
    make_tower,
    smallest_irreducible,
    unit_circle,
)

TOWERS = [(3, 1, 2), (5, 1, 2), (3, 2, 2), (3, 1, 3), (7, 1, 2)]


@pytest.mark.parametrize("p,f,r", TOWERS)
def test_tower_shapes(p, f, r):
    tw = make_tower(p, f, r)
    assert tw.base.q == p**f
    assert tw.ext.q == p ** (f * r)
    assert len(set(tw.ext._exp)) == tw.ext.q - 1


def test_gf81_modulus_is_irreducible_and_generator_has_full_order():
    tw = make_tower(3, 2, 2)
    assert is_irreducible(list(tw.ext.modulus), 3)
    E = tw.ext
    orders = {i for i in range(1, E.q) if E.pow(E.gen, i) == 1}
    assert min(orders) == E.q - 1


def test_smallest_irreducible_is_lexicographically_first():
    m = smallest_irreducible(3, 2)
    assert m == (1, 0, 1)  # x^2 + 1; x^2, x^2+2 etc. all factor over GF(3)


@pytest.mark.parametrize("bad", [(2, 1, 2), (4, 1, 2), (3, 0, 2), (3, 1, 0)])
def test_illegal_parameters(bad):
    with pytest.raises(FieldError):
        make_tower(*bad)


def test_make_tower_is_cached():
    assert make_tower(3) is make_tower(3, 1, 2)


def test_norm_examples():
    tw = make_tower(3)
    E, F = tw.ext, tw.base
    assert tw.norm_code(0) == 0
    for t in range(F.q):
        assert tw.norm_code(tw.embed_code(t)) == F.mul(t, t)
    g = E.gen
    n = tw.norm_code(g)
    assert tw.embed_code(n) == E.pow(g, 4)
    assert F.log(n) % (F.q - 1) != 0 or F.q == 2
    assert {F.pow(n, i) for i in range(F.q - 1)} == set(range(1, F.q))


def test_trace_examples():
    tw = make_tower(3)
    assert tw.trace_code(0) == 0
    for t in range(tw.q):
        assert tw.trace_code(tw.embed_code(t)) == tw.base.add(t, t)
    assert tw.trace_code(tw.eps.code) == 0


def test_conj_examples():
    tw = make_tower(3)
    E = tw.ext
    for t in range(tw.q):
        assert tw.frob_code(tw.embed_code(t)) == tw.embed_code(t)
    assert tw.conj(tw.eps) == -tw.eps
    assert tw.frob_code(E.gen) == E.pow(E.gen, 3)


@pytest.mark.parametrize("p,f", [(3, 1), (5, 1), (3, 2), (7, 1)])
def test_eps_is_root_of_smallest_nonsquare(p, f):
    tw = make_tower(p, f)
    F = tw.base
    assert not F.is_square(tw.eps_f.code)
    assert all(F.is_square(c) for c in range(1, tw.eps_f.code))
    assert tw.eps * tw.eps == tw.embed(tw.eps_f)
    assert tw.trace(tw.eps).code == 0


def test_unit_circle():
    tw3 = make_tower(3)
    assert len(unit_circle(tw3)) == 4
    assert len(unit_circle(make_tower(5))) == 6
    E = tw3.ext
    by_norm = {c for c in range(1, E.q) if tw3.norm_code(c) == 1}
    assert {x.code for x in unit_circle(tw3)} == by_norm == {E.pow(E.gen, 2 * i) for i in range(4)}


def test_transversal():
    tw = make_tower(3)
    reps = coset_transversal_u1(tw)
    assert [x.code for x in reps] == [tw.ext.exp(0), tw.ext.exp(1)]
    assert len(coset_transversal_u1(make_tower(5))) == 4
    assert {tw.norm_code(x.code) for x in reps} == {1, 2}


def test_parse_and_name_round_trip():
    E = field(3, 2)
    for c in range(E.q):
        assert E.parse(E.name(c)).code == c


def test_cross_field_operations_rejected():
    with pytest.raises(FieldError):
        field(3).one() + field(5).one()


codes81 = st.integers(min_value=0, max_value=80)


@settings(max_examples=200, deadline=None)
@given(codes81, codes81, codes81)
def test_field_axioms(a, b, c):
    E = field(3, 4)
    x, y, z = FqElem(E, a), FqElem(E, b), FqElem(E, c)
    assert x * (y + z) == x * y + x * z
    assert (x + y) - y == x
    if x:
        assert x * x.inverse() == 1


@settings(max_examples=200, deadline=None)
@given(codes81, codes81)
def test_norm_multiplicative_trace_additive(a, b):
    tw = make_tower(3, 2)
    x, y = FqElem(tw.ext, a), FqElem(tw.ext, b)
    assert tw.norm(x * y) == tw.norm(x) * tw.norm(y)
    assert tw.trace(x + y) == tw.trace(x) + tw.trace(y)
    assert tw.conj(tw.conj(x)) == x
