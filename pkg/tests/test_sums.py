from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endoscope.chars import AddChar, MultChar, enumerate_characters
from endoscope.gf import make_tower
from endoscope.sums import (
    EQUAL_PARAMETERS,
    METHODS,
    KlSpec,
    SumError,
    distinguish,
    gauss_sum,
    kl,
    kl_nonconstancy_witness,
    kl_nonzero_witness,
    kloosterman,
    value_ring,
    verify_hasse_davenport,
    verify_hd_kl,
    verify_kl_fourier,
)


def naive_kl(tower, psi, n, m, a):
    """Filter-and-sum over all (k_E^×)^n × (k_F^×)^m."""
    F, E = tower.base, tower.ext
    R = value_ring(tower)
    counts = [0] * F.p
    for ts in itertools.product(range(1, E.q), repeat=n):
        prod = 1
        tr = 0
        for t in ts:
            prod = F.mul(prod, tower.norm_code(t))
            tr = F.add(tr, tower.trace_code(t))
        for ss in itertools.product(range(1, F.q), repeat=m):
            pr, sm = prod, tr
            for s in ss:
                pr = F.mul(pr, s)
                sm = F.add(sm, s)
            if pr == a:
                counts[psi.exponent_code(sm)] += 1
    return R.from_exponent_counts(counts, F.p)


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("n,m", [(0, 1), (1, 0), (1, 1), (2, 0), (0, 2), (2, 1)])
def test_kl_matches_naive_oracle(q, n, m):
    tw = make_tower(q)
    psi = AddChar(tw.base, 1)
    for a in range(1, q):
        expected = naive_kl(tw, psi, n, m, a)
        for method in METHODS:
            assert value_ring(tw).coerce(kloosterman(KlSpec(tw, psi, n, m, a), method)) == expected


def test_kl_small_cases():
    tw = make_tower(3)
    psi = AddChar(tw.base, 1)
    R = value_ring(tw)
    for a in (1, 2):
        assert R.coerce(kl(tw, 0, 1, a, psi)) == psi.eval(tw.base.elem(a), R)
        assert R.coerce(kl(tw, 0, 0, a, psi)) == R.from_int(1 if a == 1 else 0)


def test_kl_rejects_zero_parameter():
    with pytest.raises(SumError):
        KlSpec(make_tower(3), AddChar(make_tower(3).base, 1), 1, 0, 0)


def test_gauss_sums():
    tw = make_tower(3)
    psi = AddChar(tw.base, 1)
    R = value_ring(tw)
    assert gauss_sum(tw.base, MultChar(tw.base, 0), psi, R) == R.from_int(-1)
    g = gauss_sum(tw.base, MultChar(tw.base, 1), psi, R)
    assert not g.is_zero()
    assert g * g.conjugate() == R.from_int(3)
    lhs = gauss_sum(tw.ext, MultChar(tw.base, 1).compose_norm(tw), psi.compose_trace(tw), R)
    assert lhs == -(g * g)


@pytest.mark.parametrize("p,f,r", [(3, 1, 2), (5, 1, 2), (3, 1, 3)])
def test_hasse_davenport(p, f, r):
    tw = make_tower(p, f, r)
    psi = AddChar(tw.base, 1)
    for chi in enumerate_characters(tw.base):
        assert verify_hasse_davenport(tw, chi, psi).passed


@pytest.mark.parametrize("n,m", [(0, 1), (1, 0), (2, 0), (1, 2)])
def test_fourier_identity(n, m):
    tw = make_tower(3)
    psi = AddChar(tw.base, 1)
    for chi in enumerate_characters(tw.base):
        assert verify_kl_fourier(tw, psi, n, m, chi).passed


@pytest.mark.parametrize("q,n", [(3, 0), (3, 1), (5, 2)])
def test_collapse(q, n):
    tw = make_tower(q)
    psi = AddChar(tw.base, 1)
    for a in range(1, q):
        assert verify_hd_kl(tw, psi, n, a).passed
    assert kl(tw, 0, 2, 1, psi) == -kl(tw, 1, 0, 1, psi)


def test_collapse_cubic():
    tw = make_tower(3, 1, 3)
    psi = AddChar(tw.base, 1)
    for a in (1, 2):
        assert verify_hd_kl(tw, psi, 1, a).passed


def test_witnesses():
    tw3, tw5 = make_tower(3), make_tower(5)
    psi3, psi5 = AddChar(tw3.base, 1), AddChar(tw5.base, 1)
    a1, a2 = kl_nonconstancy_witness(tw3, psi3, 1, 0)
    assert kl(tw3, 1, 0, a1, psi3) != kl(tw3, 1, 0, a2, psi3)
    assert not kl(tw3, 2, 0, kl_nonzero_witness(tw3, psi3, 2, 0), psi3).is_zero()
    kl_nonconstancy_witness(tw5, psi5, 1, 1)
    kl_nonzero_witness(tw5, psi5, 1, 1)


def test_distinguish():
    tw3, tw5 = make_tower(3), make_tower(5)
    psi3, psi5 = AddChar(tw3.base, 1), AddChar(tw5.base, 1)
    assert distinguish(tw3, psi3, 1, 0, 2, 2) == EQUAL_PARAMETERS
    assert distinguish(tw3, psi3, 2, 0, 1, 2) in (1, 2)
    for a in range(1, 5):
        for b in range(1, 5):
            if a != b:
                t = distinguish(tw5, psi5, 1, 2, a, b)
                F = tw5.base
                assert kl(tw5, 1, 2, F.mul(t, a), psi5) != kl(tw5, 1, 2, F.mul(t, b), psi5)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2), st.integers(0, 2))
def test_kl_twist_by_psi(a, c, n, m):
    # replacing ψ by ψ_c rescales the parameter: Kl_a(ψ_c) = Kl_{c^{n·2+m}·a}(ψ)
    tw = make_tower(5)
    F = tw.base
    lhs = kl(tw, n, m, a, AddChar(F, c))
    rhs = kl(tw, n, m, F.mul(F.pow(c, 2 * n + m), a), AddChar(F, 1))
    assert lhs == rhs
