from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endoscope import padic
from endoscope.padic import LocalMatrix, local_ring

R3 = local_ring(3, 1, 4)
R5 = local_ring(5, 1, 4)


def witness_param(ring, u: int, N: int) -> int:
    """u for even N, ε^{-1}u for odd N (so that c(v) = ±v matches J)."""
    tw = ring.tower
    ue = tw.embed_code(u)
    return ue if N % 2 == 0 else tw.ext.mul(tw.ext.inv(tw.eps.code), ue)


def geometric(g: LocalMatrix, terms: int) -> LocalMatrix:
    ring = g.ring
    out = LocalMatrix.identity(ring, g.n_size)
    power = out
    for _ in range(terms):
        power = power @ g
        out = out + power
    return out


def test_theta_identity():
    one = LocalMatrix.identity(R3, 3)
    assert padic.theta(one).equals(one)
    assert padic.norm_elem(one).equals(one)


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("u", [1, 2])
def test_theta_of_one_plus_phi_is_geometric_series(N, u):
    v = witness_param(R3, u, N)
    g = padic.one_plus_phi(R3, v, N)
    series = geometric(padic.phi(R3, v, N), N * (R3.k + 1))
    assert padic.theta(g).equals(series)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_theta_of_phi(N):
    for a in (1, 2):
        f = padic.phi(R3, witness_param(R3, a, N), N)
        assert padic.theta(f).equals(-f.inverse())


def test_theta_is_an_involution():
    g = padic.phi(R5, 7, 3) @ padic.one_plus_phi(R5, 11, 3)
    assert padic.theta(padic.theta(g)).equals(g)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
@pytest.mark.parametrize("u", [1, 2, 3, 4])
def test_norm_of_twisted_witness(N, u):
    v = witness_param(R5, u, N)
    g = padic.one_plus_phi(R5, v, N)
    h = padic.norm_elem(g)
    assert padic.norm_elem(padic.phi(R5, v, N) @ g).equals(-h)
    assert padic.is_unitary(h)
    assert padic.classify_iwahori(h, "U") in ("I+", "I++")
    assert padic.theta_commutes(g)


def test_phi_shape():
    f = padic.phi(R3, 1, 2)
    assert f[0, 0].is_exact_zero and f[1, 1].is_exact_zero
    assert f[0, 1].equals(R3.one())
    assert f[1, 0].equals(R3.uniformizer())
    for N in (2, 3, 4):
        for a in (1, 2):
            fa = padic.phi(R3, a, N)
            power = LocalMatrix.identity(R3, N)
            for _ in range(N):
                power = power @ fa
            assert power.equals(LocalMatrix.scalar(R3, R3.uniformizer() * R3.teichmuller(a), N))
            assert fa.det().valuation() == 1


def test_classification():
    assert padic.classify_iwahori(LocalMatrix.identity(R3, 3)) == "I++"
    assert padic.classify_iwahori(padic.one_plus_phi(R3, 1, 3)) == "I+"
    y = LocalMatrix.diag(R3, [R3.uniformizer(), R3.one()])
    assert padic.classify_iwahori(y) == "outside"


def test_unitarity():
    E = R3.tower.ext
    for t in range(1, E.q):
        tc = R3.tower.frob_code(t)
        d = LocalMatrix.diag(R3, [R3.teichmuller(t), R3.teichmuller(E.inv(tc))])
        assert padic.is_unitary(d)
    g = padic.one_plus_phi(R3, 1, 2)
    assert not padic.is_unitary(g)
    assert padic.is_unitary(padic.norm_elem(g))


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("u", [1, 2])
def test_affine_components_of_witnesses(n, u):
    tw = R3.tower
    E = tw.ext
    g = padic.one_plus_phi(R3, u, 2 * n)
    comps = [c.code for c in padic.affine_components(g).comps]
    assert comps == [1] * (2 * n - 1) + [tw.embed_code(u)]
    h = padic.norm_elem(g)
    comps = [c.code for c in padic.affine_components(h, "U").comps]
    two = E.from_int(2)
    assert comps[: n] == [two] * n
    v = E.mul(E.inv(tw.eps.code), tw.embed_code(u))
    h = padic.norm_elem(padic.one_plus_phi(R3, v, 2 * n + 1))
    full = [c.code for c in padic.affine_components(h).comps]
    assert full == [two] * (2 * n) + [E.mul(two, v)]
    assert padic.is_affine_generic(padic.affine_components(h, "U"))


def test_genericity():
    E = R3.tower.ext
    assert padic.is_affine_generic([E.one()] * 3 + [E.elem(2)])
    assert not padic.is_affine_generic([E.one(), E.zero(), E.one()])


def test_regular_elliptic():
    assert padic.is_regular_elliptic(padic.one_plus_phi(R3, 1, 3))
    assert not padic.is_regular_elliptic(LocalMatrix.identity(R3, 2))
    x = R3.one() + R3.uniformizer()
    assert not padic.is_regular_elliptic(LocalMatrix.diag(R3, [x, x]))


@pytest.mark.parametrize("N", [2, 3, 4])
def test_charpoly_methods_agree(N):
    g = padic.phi(R5, 2, N) @ padic.one_plus_phi(R5, 3, N)
    a = padic.charpoly_minors(g)
    b = padic.charpoly_faddeev(g)
    assert all(x.equals(y) for x, y in zip(a, b))


def test_inverse_methods_agree():
    g = padic.phi(R5, 2, 3) @ padic.one_plus_phi(R5, 3, 3)
    assert g.inverse().equals(g.adjugate_inverse())
    assert (g @ g.inverse()).equals(LocalMatrix.identity(R5, 3))


def test_key_lemma_small():
    g = padic.one_plus_phi(R3, 1, 2)
    res = padic.key_lemma_probe(g, 1)
    assert res.passed and res.tested > 0
    f = padic.phi(R3, 1, 2)
    assert padic.classify_iwahori(f @ g @ f.inverse()) != "outside"
    assert padic.monomial_in_I_omega((1, 0), (1, 0))
    y = LocalMatrix.diag(R3, [R3.uniformizer(), R3.one()])
    assert padic.classify_iwahori(y @ g @ y.inverse()) == "outside"


def test_strip_center_and_twisted_decomposition():
    z = 5
    g = padic.scalar_teich(R3, z, 3) @ padic.phi(R3, 2, 3) @ padic.one_plus_phi(R3, 2, 3)
    u, x = padic.decompose_twisted(g)
    assert u == R3.tower.embed_code(2)
    c, rest = padic.strip_center(x)
    assert c == z
    assert [e.code for e in padic.affine_components(rest).comps] == [1, 1, R3.tower.embed_code(2)]


def test_json_round_trip():
    g = padic.one_plus_phi(R3, 2, 3)
    assert padic.matrix_from_json(R3, g.to_json()).equals(g)


codes9 = st.integers(1, 8)


@settings(max_examples=60, deadline=None)
@given(codes9, codes9)
def test_teichmuller_multiplicative_and_frobenius(a, b):
    E = R3.tower.ext
    ta, tb = R3.teichmuller(a), R3.teichmuller(b)
    assert (ta * tb).equals(R3.teichmuller(E.mul(a, b)))
    assert ta.conj().equals(R3.teichmuller(R3.tower.frob_code(a)))
    assert ta.residue() == a


@settings(max_examples=40, deadline=None)
@given(st.lists(codes9, min_size=3, max_size=3), st.lists(codes9, min_size=3, max_size=3))
def test_components_additive_on_I_plus(xs, ys):
    def elem(cs):
        g = LocalMatrix.identity(R3, 3)
        rows = [[g[i, j] for j in range(3)] for i in range(3)]
        rows[0][1] = R3.teichmuller(cs[0])
        rows[1][2] = R3.teichmuller(cs[1])
        rows[2][0] = R3.uniformizer() * R3.teichmuller(cs[2])
        return LocalMatrix(R3, rows)

    E = R3.tower.ext
    a, b = elem(xs), elem(ys)
    got = [c.code for c in padic.affine_components(a @ b).comps]
    assert got == [E.add(x, y) for x, y in zip(xs, ys)]


@settings(max_examples=40, deadline=None)
@given(st.integers(-1, 2), st.integers(1, 8), st.integers(-1, 2), st.integers(1, 8))
def test_local_arithmetic(v1, a, v2, b):
    x = R3.pi_power(v1) * R3.teichmuller(a)
    y = R3.pi_power(v2) * R3.teichmuller(b)
    assert (x * y).valuation() == v1 + v2
    assert ((x * y) / y).equals(x)
