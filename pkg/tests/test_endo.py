from __future__ import annotations

import pytest

from endoscope import endo, padic
from endoscope.chars import AddChar, MultChar, U1Char, omega_from_u1
from endoscope.gf import make_tower
from endoscope.sscchar import ssc_u
from endoscope.sums import kl, value_ring


def kl_in(tw, n, m, a):
    return value_ring(tw).coerce(kl(tw, n, m, a, AddChar(tw.base, 1)))


def test_parity_zeta_examples():
    tw = make_tower(3)
    R = value_ring(tw)
    trivial = MultChar(tw.ext, 0)
    assert endo.parity_zeta(tw, trivial, "even") == -1
    assert endo.parity_zeta(tw, trivial, "odd") == 1
    omega = omega_from_u1(tw, U1Char(tw, 2))  # the order-2 character of U(1)
    at_eps = omega.eval(tw.eps, R)
    assert at_eps in (R.one(), R.from_int(-1))
    expected = 1 if at_eps == R.from_int(-1) else -1
    assert endo.parity_zeta(tw, omega, "even") == expected


def test_lift_examples():
    tw = make_tower(3)
    R = value_ring(tw)
    even = endo.lift(ssc_u(tw, 1, U1Char(tw, 0), False, 1), 1).target
    assert (even.a, even.zeta, even.omega.j) == (1, R.from_int(-1), 0)
    odd = endo.lift(ssc_u(tw, 1, U1Char(tw, 0), True, 1), -1).target
    assert (odd.a, odd.zeta, odd.omega.j) == (tw.eps.code, R.from_int(-1), 0)
    for j in range(4):
        src = ssc_u(tw, 2, U1Char(tw, j), False, 1)
        plus, minus = endo.lift(src, 1).target, endo.lift(src, -1).target
        assert (plus.a, plus.omega) == (minus.a, minus.omega)
        assert plus.zeta == -minus.zeta
        assert plus.is_conjugate_self_dual


def test_lift_rejects_bad_kappa():
    tw = make_tower(3)
    with pytest.raises(endo.EndoError):
        endo.lift(ssc_u(tw, 1, U1Char(tw, 0), False, 1), 0)


@pytest.mark.parametrize("parity", endo.PARITIES)
@pytest.mark.parametrize("q", [3, 5])
def test_lift_injective(parity, q):
    assert endo.lift_is_injective(parity, 1, q, 1)
    assert endo.lift_is_injective(parity, 1, q, -1)


def test_witness_examples():
    w = endo.norm_witness(3, 4, "even", 1, 1)
    assert w.ok, w.certificates
    twisted = endo.norm_witness(3, 4, "even", 1, 1, twisted=True)
    assert twisted.ok
    assert twisted.h.equals(-w.h)
    assert endo.norm_witness(3, 4, "odd", 1, 2).ok


def test_witness_components_after_center():
    E = make_tower(5).ext
    for z in (1, 7):
        w = endo.norm_witness(5, 4, "even", 2, 3, z=z)
        _, x = padic.strip_center(w.h)
        comps = [c.code for c in padic.affine_components(x).comps]
        assert comps[:-1] == [E.from_int(2)] * 3


@pytest.mark.parametrize("parity", endo.PARITIES)
def test_certificates_precision_independent(parity):
    a = endo.witness_certificates(parity, 1, 3, 4)
    b = endo.witness_certificates(parity, 1, 3, 6)
    assert a.passed and b.passed


def test_ecr_even_values():
    tw = make_tower(3)
    rep = endo.verify_ecr("even", 1, 3, 1, 0, zs=[1])
    assert rep.passed
    for row in rep.rows:
        if row["family"] == "untwisted":
            u = tw.base.parse(row["u"]).code
            assert row["lhs"] == row["rhs"] == -kl_in(tw, 1, 0, tw.base.mul(1, u))


def test_ecr_odd_values():
    tw = make_tower(3)
    rep = endo.verify_ecr("odd", 1, 3, 1, 0, zs=[1])
    assert rep.passed
    for row in rep.rows:
        if row["family"] == "untwisted":
            u = tw.base.parse(row["u"]).code
            assert row["lhs"] == kl_in(tw, 1, 1, tw.base.mul(8 % 3, u))


@pytest.mark.parametrize("parity", endo.PARITIES)
@pytest.mark.parametrize("b", [1, 2])
@pytest.mark.parametrize("j", range(4))
def test_ecr_small_exhaustive(parity, b, j):
    assert endo.verify_ecr(parity, 1, 3, b, j).passed


def test_ecr_twisted_base_change_is_skipped():
    rep = endo.verify_ecr("even", 1, 3, 1, 0, kappa=-1)
    assert rep.outcome == "skipped" and rep.reason


@pytest.mark.parametrize("parity", endo.PARITIES)
def test_fourier_uniqueness(parity):
    rep = endo.fourier_uniqueness_check(parity, 1, 3)
    assert rep.passed and len(rep.rows) == 1


def test_fourier_uniqueness_q5():
    rep = endo.fourier_uniqueness_check("even", 2, 5)
    assert rep.passed and len(rep.rows) == 3


@pytest.mark.parametrize("q", [3, 5, 7])
@pytest.mark.parametrize("parity", endo.PARITIES)
def test_parity_report(q, parity):
    assert endo.parity_report(q, parity).passed
