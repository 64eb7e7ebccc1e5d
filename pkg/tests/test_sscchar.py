from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endoscope import padic, sscchar
from endoscope.chars import AddChar, MultChar, U1Char, omega_from_u1
from endoscope.gf import FqElem, make_tower
from endoscope.sscchar import NotGeneric, SscError, ssc_gl, ssc_u
from endoscope.sums import kl, value_ring


def ext(tw, u):
    return tw.embed_code(u)


def eps_inv(tw, u):
    E = tw.ext
    return E.mul(E.inv(tw.eps.code), ext(tw, u))


def kl_in(tw, n, m, a):
    return value_ring(tw).coerce(kl(tw, n, m, a, AddChar(tw.base, 1)))


def both(fn, *args, **kw):
    closed = fn(*args, "closed", **kw).value
    brute = fn(*args, "brute", **kw).value
    assert closed == brute
    return closed


@pytest.mark.parametrize("q,n", [(3, 1), (3, 2), (5, 1)])
def test_gl_even_witness_value(q, n):
    tw = make_tower(q)
    F = tw.base
    pi = ssc_gl(tw, 1, 1, MultChar(tw.ext, 0))
    for u in range(1, q):
        comps = [1] * (2 * n - 1) + [ext(tw, u)]
        v = both(sscchar.theta_gl_even, comps, pi) if q ** (2 * n) < 100 else sscchar.theta_gl_even(comps, pi).value
        assert v == -kl_in(tw, n, 0, F.mul(F.from_int(2 ** (2 * n)), u))


def test_gl_even_central_scaling():
    tw = make_tower(3)
    R = value_ring(tw)
    omega = omega_from_u1(tw, U1Char(tw, 1))
    pi = ssc_gl(tw, 1, -1, omega)
    comps = [1, 2]
    base = sscchar.theta_gl_even(comps, pi).value
    # z̄ is the residue of the Teichmüller scalar, i.e. the code z itself
    for z in range(1, 9):
        zbar = FqElem(tw.ext, z)
        assert both(sscchar.theta_gl_even, comps, pi, z=z) == omega.eval(zbar, R) * base


@pytest.mark.parametrize("zeta", [1, -1])
def test_gl_even_phi_witness_value(zeta):
    tw = make_tower(3)
    F = tw.base
    pi = ssc_gl(tw, 1, zeta, MultChar(tw.ext, 0))
    for u in (1, 2):
        v = both(sscchar.theta_gl_even_phi, [1, ext(tw, u)], u, pi)
        assert v == kl_in(tw, 1, 0, F.mul(4 % 3, u)).int_scale(zeta)


def test_gl_odd_witness_value():
    tw = make_tower(3)
    F = tw.base
    pi = ssc_gl(tw, tw.eps.code, 1, MultChar(tw.ext, 0))
    for u in (1, 2):
        v = both(sscchar.theta_gl_odd, [1, 1, eps_inv(tw, u)], pi)
        assert v == kl_in(tw, 1, 1, F.mul(F.from_int(8), u))


def test_gl_odd_rejects_nongeneric_last_component():
    tw = make_tower(3)
    pi = ssc_gl(tw, tw.eps.code, 1, MultChar(tw.ext, 0))
    # Tr(ε·1) = 0 when 1 ∈ k_F, so the last component 1 violates genericity
    with pytest.raises(NotGeneric):
        sscchar.theta_gl_odd([1, 1, 1], pi)


@pytest.mark.parametrize("zeta", [1, -1])
def test_gl_odd_phi_witness_value(zeta):
    tw = make_tower(3)
    F = tw.base
    pi = ssc_gl(tw, tw.eps.code, zeta, MultChar(tw.ext, 0))
    for u in (1, 2):
        v = both(sscchar.theta_gl_odd_phi, [1, 1, eps_inv(tw, u)], u, pi)
        assert v == kl_in(tw, 1, 1, F.mul(F.from_int(8), u)).int_scale(zeta)


@pytest.mark.parametrize("b", [1, 2])
def test_u_even_witness_value(b):
    tw = make_tower(3)
    F, E = tw.base, tw.ext
    R = value_ring(tw)
    wp = U1Char(tw, 1)
    pi = ssc_u(tw, b, wp, False, 1)
    for u in (1, 2):
        h = [E.from_int(2), ext(tw, F.mul(2, u))]
        v = both(sscchar.theta_u_even, h, pi)
        assert v == -kl_in(tw, 1, 0, F.mul(F.mul(4 % 3, u), b))
        for z in (x for x in range(1, 9) if tw.norm_code(x) == 1):
            zbar = FqElem(E, z)
            assert both(sscchar.theta_u_even, h, pi, z=z) == wp.eval(zbar, R) * v


def test_u_odd_witness_value():
    tw = make_tower(3)
    F, E = tw.base, tw.ext
    for b in (1, 2):
        pi = ssc_u(tw, b, U1Char(tw, 0), True, 1)
        for u in (1, 2):
            h = [E.from_int(2), E.mul(2, eps_inv(tw, u))]
            v = both(sscchar.theta_u_odd, h, pi)
            assert v == kl_in(tw, 1, 1, F.mul(F.mul(8 % 3, u), b))
    with pytest.raises(SscError):
        sscchar.theta_u_odd([2, 0], ssc_u(tw, 1, U1Char(tw, 0), True, 1))


def test_wrong_component_counts_rejected():
    tw = make_tower(3)
    pi = ssc_gl(tw, 1, 1, MultChar(tw.ext, 0))
    with pytest.raises(SscError):
        sscchar.theta_gl_even([1, 1, 1], pi)


def test_chi_eval_examples():
    tw = make_tower(3)
    lr = padic.local_ring(3, 1, 4)
    R = value_ring(tw)
    zeta = R.root_of_unity(R.M // 2)
    pi = ssc_gl(tw, 1, zeta, MultChar(tw.ext, 0))
    assert sscchar.chi_eval(pi, padic.LocalMatrix.identity(lr, 2)) == R.one()
    assert sscchar.chi_eval(pi, padic.phi(lr, 1, 2)) == zeta
    psi_e = AddChar(tw.base, 1).compose_trace(tw)
    for u in (1, 2):
        g = padic.one_plus_phi(lr, u, 2)
        expected = psi_e.eval(FqElem(tw.ext, 1), R) * psi_e.eval(FqElem(tw.ext, ext(tw, u)), R)
        assert sscchar.chi_eval(pi, g) == expected


@pytest.mark.parametrize("variant", sscchar.GL_VARIANTS)
def test_torus_representatives(variant):
    for u in (1, 2):
        assert sscchar.validate_torus_reps(variant, 1, 3, u, 4).passed


@pytest.mark.parametrize("variant", sscchar.GL_VARIANTS)
def test_closed_description_matches_filter(variant):
    tw = make_tower(3)
    for u in (1, 2):
        assert sorted(sscchar.gl_reps(tw, variant, 1, u)) == sorted(sscchar.gl_reps_filtered(tw, variant, 1, u))


@pytest.mark.parametrize("op", sscchar.OPERATIONS)
def test_oracle_small(op):
    rep = sscchar.oracle_check(make_tower(3), op, 1, samples=20, seed=1)
    assert rep.passed, rep.to_json()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 24), min_size=4, max_size=4), st.integers(0, 23))
def test_gl_even_closed_equals_brute_random(comps, j):
    tw = make_tower(5)
    omega = omega_from_u1(tw, U1Char(tw, j % 6))
    pi = ssc_gl(tw, 1, 1, omega)
    try:
        closed = sscchar.theta_gl_even(comps, pi, "closed").value
    except NotGeneric:
        return
    assert closed == sscchar.theta_gl_even(comps, pi, "brute").value
