"""Character values of simple supercuspidal representations at affine generic elements.

Two independent routes are provided for every case:

* closed forms: a single generalized Kloosterman sum at an explicit parameter;
* brute force: the (twisted) character formula summed over the torus
  representatives at the residue level, term by term.

A third, matrix-level route (``validate_torus_reps``) enumerates Teichmüller
diagonals y, tests y·g·θ(y)^{-1} ∈ K with the p-adic model, and sums the
inducing character over the survivors.

GL-side representations π_{a,ζ,ω} are evaluated for a = 1 (even N) and
a = ε (odd N) only; other a are reached by changing the uniformizer (see
``endo``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .chars import AddChar, MultChar, U1Char, is_conjugate_self_dual
from .cyclo import CycNum, CycRing
from .gf import FqElem, QuadExt
from .padic import (
    LocalMatrix,
    LocalRing,
    PadicError,
    affine_components,
    member_of_K,
    one_plus_phi,
    phi,
    teich_diag,
    theta,
)
from .report import VerifyReport, verdict
from .sums import kl, value_ring

METHODS = ("closed", "brute")


class SscError(ValueError):
    pass


class NotGeneric(SscError):
    """The element (or its norm) is not affine generic."""


@dataclass(frozen=True)
class SscGL:
    """π_{a,ζ,ω} on GL_N(E); ζ is a root of unity in the tower's value ring."""

    tower: QuadExt
    a: int  # code in k_E^×
    zeta: CycNum
    omega: MultChar
    psi: AddChar

    def __post_init__(self) -> None:
        if self.a == 0:
            raise SscError("a must be nonzero")
        ring = value_ring(self.tower)
        object.__setattr__(self, "zeta", ring.coerce(self.zeta))
        if self.omega.field is not self.tower.ext:
            raise SscError("ω must be a character of k_E^×")
        if self.psi.field is not self.tower.base or self.psi.is_trivial:
            raise SscError("ψ must be a nontrivial character of k_F")

    @property
    def ring(self) -> CycRing:
        return value_ring(self.tower)

    @property
    def is_conjugate_self_dual(self) -> bool:
        ring = self.ring
        return (self.zeta == 1 or self.zeta == -1) and is_conjugate_self_dual(self.tower, self.omega)

    def to_json(self) -> dict:
        return {"a": self.tower.ext.name(self.a), "zeta": self.zeta, "omega": self.omega.label, "psi": self.psi.label}


def ssc_gl(tower: QuadExt, a: int, zeta: int | CycNum, omega: MultChar, psi: AddChar | None = None) -> SscGL:
    ring = value_ring(tower)
    z = ring.from_int(zeta) if isinstance(zeta, int) else zeta
    return SscGL(tower, a, z, omega, psi or AddChar(tower.base, 1))


@dataclass(frozen=True)
class SscU:
    """π′_{b,ω′} on U(N), N = 2n or 2n + 1."""

    tower: QuadExt
    b: int  # code in k_F^×
    omega_p: U1Char
    odd: bool
    n: int
    psi: AddChar

    def __post_init__(self) -> None:
        if self.b == 0:
            raise SscError("b must be nonzero")
        if self.n < 1:
            raise SscError("n must be at least 1")
        if self.psi.field is not self.tower.base or self.psi.is_trivial:
            raise SscError("ψ must be a nontrivial character of k_F")

    @property
    def N(self) -> int:
        return 2 * self.n + (1 if self.odd else 0)

    def to_json(self) -> dict:
        return {
            "b": self.tower.base.name(self.b),
            "omega_p": self.omega_p.label,
            "parity": "odd" if self.odd else "even",
            "n": self.n,
            "psi": self.psi.label,
        }


def ssc_u(tower: QuadExt, b: int, omega_p: U1Char, odd: bool, n: int, psi: AddChar | None = None) -> SscU:
    return SscU(tower, b, omega_p, odd, n, psi or AddChar(tower.base, 1))


@dataclass(frozen=True)
class CharValue:
    value: CycNum
    method: str
    element_desc: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"value": self.value, "method": self.method, "element": self.element_desc}


# -- helpers ---------------------------------------------------------------------


def _ext_codes(tower: QuadExt, comps: Sequence[FqElem | int]) -> list[int]:
    out = []
    for c in comps:
        if isinstance(c, int):
            out.append(c)
        elif c.field is tower.ext:
            out.append(c.code)
        elif c.field is tower.base:
            out.append(tower.embed_code(c.code))
        else:
            raise SscError("component from an unrelated field")
    return out


def _base_code(tower: QuadExt, c: FqElem | int) -> int:
    if isinstance(c, int):
        return c
    if c.field is tower.base:
        return c.code
    if c.field is tower.ext:
        return tower.pull_code(c.code)
    raise SscError("value from an unrelated field")


class _Ctx:
    """Residue arithmetic shortcuts for one tower and one ψ."""

    def __init__(self, tower: QuadExt, psi: AddChar):
        self.tower = tower
        self.E = tower.ext
        self.F = tower.base
        self.psi = psi
        self.ring = value_ring(tower)
        self.step_p = self.ring.M // tower.p
        self.psi_e = psi.compose_trace(tower)

    def c(self, x: int) -> int:
        return self.tower.frob_code(x)

    def mul(self, *xs: int) -> int:
        acc = 1
        for x in xs:
            acc = self.E.mul(acc, x)
        return acc

    def div(self, x: int, y: int) -> int:
        return self.E.mul(x, self.E.inv(y))

    def add(self, *xs: int) -> int:
        acc = 0
        for x in xs:
            acc = self.E.add(acc, x)
        return acc

    def nr(self, x: int) -> int:
        return self.tower.norm_code(x)

    def tr(self, x: int) -> int:
        return self.tower.trace_code(x)

    def emb(self, a: int) -> int:
        return self.tower.embed_code(a)

    def psi_tr(self, x: int) -> int:
        """ψ∘Tr exponent (mod p) of x ∈ k_E."""
        return self.psi_e.exponent_code(x)

    def psi_f(self, x: int) -> int:
        """ψ exponent of x ∈ k_E lying in k_F."""
        return self.psi.exponent_code(self.tower.pull_code(x))


def _kl_value(tower: QuadExt, psi: AddChar, n: int, m: int, a: int, ring: CycRing) -> CycNum:
    return ring.coerce(kl(tower, n, m, a, psi))


def _require_generic(values: Iterable[int], what: str) -> None:
    if any(v == 0 for v in values):
        raise NotGeneric(f"{what} is not affine generic")


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise SscError(f"unknown method {method!r}; expected one of {METHODS}")


def _central_gl(pi: SscGL, z: int | None) -> CycNum:
    ring = pi.ring
    if z is None:
        return ring.one()
    return pi.omega.eval(FqElem(pi.tower.ext, z), ring)


def _zeta_power(pi: SscGL) -> CycNum:
    return pi.zeta


# -- torus representative sets (GL side) -----------------------------------------

GL_VARIANTS = ("gl-even", "gl-even-phi", "gl-odd", "gl-odd-phi")


def pinned_index(variant: str, n: int) -> int:
    """0-based coordinate fixed to 1 in the representative set."""
    return {"gl-even": n - 1, "gl-even-phi": 2 * n - 1, "gl-odd": n, "gl-odd-phi": 2 * n}[variant]


def gl_size(variant: str, n: int) -> int:
    return 2 * n + (1 if variant.startswith("gl-odd") else 0)


def _lr(ctx: _Ctx, variant: str, t: Sequence[int], u: int) -> tuple[list[int], list[int]]:
    """Left and right diagonal factors of the residue of y·g·θ(y)^{-1} (twisted: φ^{-1}y φ_u ...)."""
    N = len(t)
    r = [ctx.c(t[N - 1 - i]) for i in range(N)]
    if variant.endswith("-phi"):
        l = [ctx.mul(t[N - 1], u)] + list(t[: N - 1])
    else:
        l = list(t)
    return l, r


def gl_reps(tower: QuadExt, variant: str, n: int, u: int = 1) -> list[tuple[int, ...]]:
    """Representatives from the closed description (u ∈ k_F^× as a k_E code)."""
    ctx = _Ctx(tower, AddChar(tower.base, 1))
    E = ctx.E
    units = list(E._exp)
    out: list[tuple[int, ...]] = []
    if variant == "gl-even":
        N = 2 * n
        for alpha_f in tower.base._exp:
            alpha = ctx.emb(alpha_f)
            for free in itertools.product(units, repeat=n - 1):
                t = [0] * N
                t[: n - 1] = free
                t[n - 1] = 1
                for i in range(n):
                    t[N - 1 - i] = ctx.div(alpha, ctx.c(t[i]))
                out.append(tuple(t))
    elif variant == "gl-even-phi":
        N = 2 * n
        mids = [x for x in units if ctx.emb(ctx.nr(x)) == u]
        for free in itertools.product(units, repeat=n - 1):
            for mid in mids:
                t = [0] * N
                t[: n - 1] = free
                t[n - 1] = mid
                for i in range(n - 1):
                    t[2 * n - 2 - i] = ctx.div(u, ctx.c(t[i]))
                t[N - 1] = 1
                out.append(tuple(t))
    elif variant == "gl-odd":
        N = 2 * n + 1
        for free in itertools.product(units, repeat=n):
            t = [0] * N
            t[:n] = free
            t[n] = 1
            for i in range(n):
                t[N - 1 - i] = E.inv(ctx.c(t[i]))
            out.append(tuple(t))
    elif variant == "gl-odd-phi":
        N = 2 * n + 1
        for free in itertools.product(units, repeat=n):
            t = [0] * N
            t[:n] = free
            for i in range(n):
                t[2 * n - 1 - i] = ctx.div(u, ctx.c(t[i]))
            t[N - 1] = 1
            out.append(tuple(t))
    else:
        raise SscError(f"unknown variant {variant!r}")
    return sorted(out)


def gl_reps_filtered(tower: QuadExt, variant: str, n: int, u: int = 1) -> list[tuple[int, ...]]:
    """Same set by filtering every pinned diagonal (slow; cross-check only)."""
    ctx = _Ctx(tower, AddChar(tower.base, 1))
    N = gl_size(variant, n)
    pin = pinned_index(variant, n)
    out = []
    for free in itertools.product(list(ctx.E._exp), repeat=N - 1):
        t = list(free[:pin]) + [1] + list(free[pin:])
        l, r = _lr(ctx, variant, t, u)
        diag = {ctx.mul(a, b) for a, b in zip(l, r)}
        if len(diag) != 1:
            continue
        if variant.endswith("-phi") and diag != {u}:
            continue
        out.append(tuple(t))
    return sorted(out)


def _gl_brute(pi: SscGL, variant: str, n: int, comps: list[int], u: int, z: int | None, reps: str = "closed") -> CycNum:
    tower = pi.tower
    ctx = _Ctx(tower, pi.psi)
    N = gl_size(variant, n)
    if len(comps) != N:
        raise SscError(f"expected {N} components")
    a = pi.a
    ring = ctx.ring
    counts = [0] * ring.M
    step_w = ring.M // pi.omega.order
    zc = 1 if z is None else z
    rep_list = gl_reps(tower, variant, n, u) if reps == "closed" else gl_reps_filtered(tower, variant, n, u)
    for t in rep_list:
        l, r = _lr(ctx, variant, t, u)
        alpha = ctx.mul(l[0], r[0])
        if any(ctx.mul(x, y) != alpha for x, y in zip(l, r)):  # pragma: no cover
            raise SscError("representative does not give a central diagonal")
        inv_alpha = ctx.E.inv(alpha)
        s = 0
        for i in range(N - 1):
            s = ctx.add(s, ctx.mul(l[i], r[i + 1], comps[i], inv_alpha))
        corner = ctx.mul(l[N - 1], r[0], comps[N - 1], inv_alpha)
        s = ctx.add(s, ctx.mul(a, corner))
        e = ctx.psi_tr(s) * ctx.step_p + pi.omega.exponent_code(ctx.mul(alpha, zc)) * step_w
        counts[e % ring.M] += 1
    value = ring.from_exponent_counts(counts)
    if variant.endswith("-phi"):
        value = value * pi.zeta
    return value


# -- the four GL closed forms -------------------------------------------------------


def _require_a(pi: SscGL, odd: bool) -> None:
    want = pi.tower.eps.code if odd else 1
    if pi.a != want:
        raise SscError("closed forms are stated for a = ε (odd N) or a = 1 (even N); renormalize the uniformizer first")


def _gl_eval(pi: SscGL, variant: str, comps: Sequence[FqElem | int], u: int, z: int | None, method: str, param: int, sign: int, kl_m: int, n: int) -> CharValue:
    _check_method(method)
    codes = _ext_codes(pi.tower, comps)
    desc = {
        "variant": variant,
        "comps": [pi.tower.ext.name(c) for c in codes],
        **({"u": pi.tower.ext.name(u)} if variant.endswith("-phi") else {}),
        **({"z": pi.tower.ext.name(z)} if z is not None else {}),
    }
    central = _central_gl(pi, z)
    if method == "closed":
        v = _kl_value(pi.tower, pi.psi, n, kl_m, param, pi.ring).int_scale(sign)
        if variant.endswith("-phi"):
            v = v * pi.zeta
        return CharValue(v * central, "closed_form", desc)
    return CharValue(_gl_brute(pi, variant, n, codes, u, z), "brute_force", desc)


def _n_from(comps: Sequence, odd: bool) -> int:
    N = len(comps)
    if (N % 2 == 1) != odd or N < 2:
        raise SscError(f"{N} components do not fit the {'odd' if odd else 'even'} case")
    return N // 2


def theta_gl_even(comps: Sequence[FqElem | int], pi: SscGL, method: str = "closed", z: int | None = None) -> CharValue:
    """Θ_{π,θ}(z·g) for g ∈ I⁺ with components ``comps``, N = 2n."""
    _require_a(pi, False)
    n = _n_from(comps, False)
    ctx = _Ctx(pi.tower, pi.psi)
    g = _ext_codes(pi.tower, comps)
    N = 2 * n
    norm_comps = [ctx.add(g[i], ctx.c(g[N - 2 - i])) for i in range(N - 1)] + [ctx.tr(g[N - 1])]
    _require_generic(norm_comps, "N(g)")
    param = 1
    for i in range(n - 1):
        param = ctx.F.mul(param, ctx.nr(norm_comps[i]))
    param = ctx.F.mul(param, ctx.F.mul(ctx.tr(g[n - 1]), ctx.tr(g[N - 1])))
    _require_generic([param], "N(g)")
    return _gl_eval(pi, "gl-even", g, 1, z, method, param, -1, 0, n)


def theta_gl_even_phi(comps: Sequence[FqElem | int], u: FqElem | int, pi: SscGL, method: str = "closed", z: int | None = None) -> CharValue:
    """Θ_{π,θ}(z·φ_u·g), u ∈ k_F^×, N = 2n."""
    _require_a(pi, False)
    n = _n_from(comps, False)
    ctx = _Ctx(pi.tower, pi.psi)
    g = _ext_codes(pi.tower, comps)
    uf = _base_code(pi.tower, u)
    if uf == 0:
        raise SscError("u must be nonzero")
    ue = ctx.emb(uf)
    N = 2 * n
    neg_norm = [ctx.add(g[i], ctx.c(g[N - 1 - i])) for i in range(1, N - 1)]
    neg_norm += [ctx.add(ctx.div(g[N - 1], ue), ctx.c(g[0])), ctx.add(ctx.mul(ue, g[0]), ctx.c(g[N - 1]))]
    _require_generic(neg_norm, "-N(φ_u g)")
    param = ctx.nr(ctx.add(ctx.mul(ue, g[0]), ctx.c(g[N - 1])))
    for i in range(1, n):
        param = ctx.F.mul(param, ctx.nr(ctx.add(g[i], ctx.c(g[N - 1 - i]))))
    param = ctx.F.mul(param, ctx.F.inv(uf))
    return _gl_eval(pi, "gl-even-phi", g, ue, z, method, param, 1, 0, n)


def theta_gl_odd(comps: Sequence[FqElem | int], pi: SscGL, method: str = "closed", z: int | None = None) -> CharValue:
    """Θ_{π,θ}(z·g), N = 2n + 1, π = π_{ε,ζ,ω}."""
    _require_a(pi, True)
    n = _n_from(comps, True)
    ctx = _Ctx(pi.tower, pi.psi)
    g = _ext_codes(pi.tower, comps)
    N = 2 * n + 1
    eps = pi.tower.eps.code
    norm_comps = [ctx.add(g[i], ctx.c(g[N - 2 - i])) for i in range(N - 1)]
    norm_comps.append(ctx.E.sub(g[N - 1], ctx.c(g[N - 1])))
    _require_generic(norm_comps, "N(g)")
    param = 1
    for i in range(n):
        param = ctx.F.mul(param, ctx.nr(norm_comps[i]))
    param = ctx.F.mul(param, ctx.tr(ctx.mul(eps, g[N - 1])))
    _require_generic([param], "N(g)")
    return _gl_eval(pi, "gl-odd", g, 1, z, method, param, 1, 1, n)


def theta_gl_odd_phi(comps: Sequence[FqElem | int], u: FqElem | int, pi: SscGL, method: str = "closed", z: int | None = None) -> CharValue:
    """Θ_{π,θ}(z·φ_{ε^{-1}u}·g), N = 2n + 1."""
    _require_a(pi, True)
    n = _n_from(comps, True)
    ctx = _Ctx(pi.tower, pi.psi)
    g = _ext_codes(pi.tower, comps)
    uf = _base_code(pi.tower, u)
    if uf == 0:
        raise SscError("u must be nonzero")
    ue = ctx.emb(uf)
    N = 2 * n + 1
    eps = pi.tower.eps.code
    E = ctx.E
    neg_norm = [ctx.add(g[i], ctx.c(g[N - 1 - i])) for i in range(1, N - 1)]
    neg_norm.append(ctx.add(ctx.mul(eps, ctx.div(g[N - 1], ue)), ctx.c(g[0])))
    neg_norm.append(E.sub(ctx.mul(ctx.div(ue, eps), g[0]), ctx.c(g[N - 1])))
    _require_generic(neg_norm, "-N(φ_{ε^{-1}u} g)")
    param = ctx.nr(E.sub(ctx.mul(ue, g[0]), ctx.mul(eps, ctx.c(g[N - 1]))))
    for i in range(1, n):
        param = ctx.F.mul(param, ctx.nr(ctx.add(g[i], ctx.c(g[N - 1 - i]))))
    param = ctx.F.mul(param, ctx.tr(g[n]))
    param = ctx.F.mul(param, ctx.F.inv(uf))
    _require_generic([param], "-N(φ_{ε^{-1}u} g)")
    # twisted element φ_{ε^{-1}u} = φ_{ε^{-1}}·(diag(u,1,...,1) up to K): the left factor is u
    return _gl_eval(pi, "gl-odd-phi", g, ue, z, method, param, 1, 1, n)


# -- unitary side -------------------------------------------------------------------


def _u_inputs(pi: SscU, comps: Sequence[FqElem | int]) -> list[int]:
    """Components as k_E codes (k_F entries embedded)."""
    n = pi.n
    want = n + 1
    if len(comps) != want:
        raise SscError(f"U({pi.N}) has {want} affine simple components")
    codes = _ext_codes(pi.tower, comps)
    tower = pi.tower
    if pi.odd:
        if tower.trace_code(codes[-1]) != 0:
            raise SscError("last component must be trace-zero")
    else:
        for c in codes[-2:]:
            if not tower.in_base_code(c):
                raise SscError("last two components must lie in k_F")
    return codes


def _central_u(pi: SscU, z: int | None, ring: CycRing) -> CycNum:
    if z is None:
        return ring.one()
    return pi.omega_p.eval(FqElem(pi.tower.ext, z), ring)


def _u_brute(pi: SscU, h: list[int], z: int | None) -> CycNum:
    ctx = _Ctx(pi.tower, pi.psi)
    ring = ctx.ring
    E = ctx.E
    n = pi.n
    b = ctx.emb(pi.b)
    counts = [0] * ring.M
    units = list(E._exp)
    if not pi.odd:
        transversal = [E.exp(i) for i in range(pi.tower.q - 1)]
        for free in itertools.product(units, repeat=n - 1):
            for tn in transversal:
                t = list(free) + [tn]
                d = t + [E.inv(ctx.c(x)) for x in reversed(t)]
                s = 0
                for i in range(n - 1):
                    s = ctx.add(s, ctx.mul(ctx.div(d[i], d[i + 1]), h[i]))
                mid = ctx.mul(ctx.div(d[n - 1], d[n]), h[n - 1])
                corner = ctx.mul(ctx.div(d[2 * n - 1], d[0]), h[n])
                e = ctx.psi_tr(s) + ctx.psi_f(ctx.add(mid, ctx.mul(b, corner)))
                counts[(e * ctx.step_p) % ring.M] += 1
    else:
        eps = pi.tower.eps.code
        for t in itertools.product(units, repeat=n):
            d = list(t) + [1] + [E.inv(ctx.c(x)) for x in reversed(t)]
            s = 0
            for i in range(n):
                s = ctx.add(s, ctx.mul(ctx.div(d[i], d[i + 1]), h[i]))
            corner = ctx.mul(ctx.div(d[2 * n], d[0]), h[n])
            e = ctx.psi_tr(s) + ctx.psi_f(ctx.mul(b, eps, corner))
            counts[(e * ctx.step_p) % ring.M] += 1
    return ring.from_exponent_counts(counts) * _central_u(pi, z, ring)


def _u_eval(pi: SscU, comps: Sequence[FqElem | int], method: str, z: int | None) -> CharValue:
    _check_method(method)
    if z is not None and pi.tower.norm_code(z) != 1:
        raise SscError("central element must lie in U(1)")
    h = _u_inputs(pi, comps)
    _require_generic(h, "h")
    ctx = _Ctx(pi.tower, pi.psi)
    n = pi.n
    desc = {"variant": "u-odd" if pi.odd else "u-even", "comps": [ctx.E.name(c) for c in h]}
    if z is not None:
        desc["z"] = ctx.E.name(z)
    ring = ctx.ring
    if method == "brute":
        return CharValue(_u_brute(pi, h, z), "brute_force", desc)
    F = ctx.F
    param = 1
    if not pi.odd:
        for i in range(n - 1):
            param = F.mul(param, ctx.nr(h[i]))
        param = F.mul(param, F.mul(pi.tower.pull_code(h[n - 1]), pi.tower.pull_code(h[n])))
        param = F.mul(param, pi.b)
        v = _kl_value(pi.tower, pi.psi, n, 0, param, ring).int_scale(-1)
    else:
        for i in range(n):
            param = F.mul(param, ctx.nr(h[i]))
        param = F.mul(param, pi.tower.pull_code(ctx.mul(h[n], pi.tower.eps.code)))
        param = F.mul(param, pi.b)
        v = _kl_value(pi.tower, pi.psi, n, 1, param, ring)
    return CharValue(v * _central_u(pi, z, ring), "closed_form", desc)


def theta_u_even(comps: Sequence[FqElem | int], pi: SscU, method: str = "closed", z: int | None = None) -> CharValue:
    """Θ_{π′}(z·h) for h ∈ I_H⁺ with components (h_1..h_{n-1} ∈ k_E, h_n, h_{2n} ∈ k_F)."""
    if pi.odd:
        raise SscError("π′ is a representation of an odd unitary group")
    return _u_eval(pi, comps, method, z)


def theta_u_odd(comps: Sequence[FqElem | int], pi: SscU, method: str = "closed", z: int | None = None) -> CharValue:
    """Θ_{π′}(z·h) for h ∈ I_H⁺ with components (h_1..h_n ∈ k_E, h_{2n+1} ∈ k_E^0)."""
    if not pi.odd:
        raise SscError("π′ is a representation of an even unitary group")
    return _u_eval(pi, comps, method, z)


# -- χ_{a,ζ,ω} on K and the matrix-level oracle ---------------------------------------


def chi_eval(pi: SscGL, g: LocalMatrix) -> CycNum:
    """χ_{a,ζ,ω}(g) for g ∈ K = Z I⁺ ⟨φ_{a^{-1}}⟩."""
    ring_local = g.ring
    if ring_local.tower is not pi.tower:
        raise SscError("matrix and representation use different towers")
    E = pi.tower.ext
    a_inv = E.inv(pi.a)
    dec = member_of_K(g, a_inv)
    if dec is None:
        raise SscError("element is not in K")
    m, j, c, xplus = dec
    N = g.n_size
    ring = pi.ring
    comps = [x.code for x in affine_components(xplus).comps]
    ctx = _Ctx(pi.tower, pi.psi)
    s = 0
    for x in comps[:-1]:
        s = ctx.add(s, x)
    s = ctx.add(s, ctx.mul(pi.a, comps[-1]))
    value = ring.root_of_unity(ctx.psi_tr(s) * ctx.step_p)
    value = value * pi.omega.eval(FqElem(E, c), ring)
    zeta = pi.zeta
    if j:
        value = value * zeta**j
    if m:
        # ϖ = φ_{a^{-1}}^N · â, so χ(ϖ) = ζ^N·ω(a)
        chi_pi = zeta**N * pi.omega.eval(FqElem(E, pi.a), ring)
        if m < 0:
            # χ(ϖ) is a root of unity; invert via its conjugate
            chi_pi = chi_pi.conjugate()
            m = -m
        value = value * chi_pi**m
    return value


def witness_element(lr: LocalRing, variant: str, n: int, u: int) -> LocalMatrix:
    """The witness 1+φ_{u'} or φ_{u'}(1+φ_{u'}), u' = u (even) or ε^{-1}u (odd)."""
    N = gl_size(variant, n)
    E = lr.tower.ext
    ue = lr.tower.embed_code(u)
    up = E.mul(E.inv(lr.tower.eps.code), ue) if variant.startswith("gl-odd") else ue
    g = one_plus_phi(lr, up, N)
    if variant.endswith("-phi"):
        g = phi(lr, up, N) @ g
    return g


def validate_torus_reps(variant: str, n: int, q_or_tower: int | QuadExt, u: int = 1, precision: int = 4, pi: SscGL | None = None) -> VerifyReport:
    """Matrix-level check of the representative set of a twisted torus sum.

    Enumerates all Teichmüller diagonals y (pinned coordinate 1), keeps those
    with y·g·θ(y)^{-1} ∈ K, compares with ``gl_reps`` and sums χ over them.
    """
    from .gf import make_tower
    from .padic import local_ring

    if variant not in GL_VARIANTS:
        raise SscError(f"unknown variant {variant!r}")
    tower = make_tower(q_or_tower) if isinstance(q_or_tower, int) else q_or_tower
    if tower.f != 1:
        raise SscError("validation runs over prime residue fields")
    lr = local_ring(tower.p, tower.f, precision)
    E = tower.ext
    odd = variant.startswith("gl-odd")
    a = tower.eps.code if odd else 1
    if pi is None:
        pi = ssc_gl(tower, a, 1, MultChar(E, 0))
    a_inv = E.inv(a)
    N = gl_size(variant, n)
    pin = pinned_index(variant, n)
    g = witness_element(lr, variant, n, u)
    th_cache = {}
    passing = []
    chi_total = pi.ring.zero()
    for free in itertools.product(list(E._exp), repeat=N - 1):
        t = tuple(free[:pin]) + (1,) + tuple(free[pin:])
        y = teich_diag(lr, t)
        x = y @ g @ theta(y).inverse()
        try:
            dec = member_of_K(x, a_inv)
        except PadicError:
            dec = None
        if dec is None:
            continue
        passing.append(t)
        chi_total = chi_total + chi_eval(pi, x)
    ue = tower.embed_code(u)
    expected = gl_reps(tower, variant, n, ue)
    ok_set = sorted(passing) == expected
    comps = [1] * (N - 1) + [E.mul(E.inv(tower.eps.code), ue) if odd else ue]
    closed = {
        "gl-even": lambda: theta_gl_even(comps, pi),
        "gl-even-phi": lambda: theta_gl_even_phi(comps, u, pi),
        "gl-odd": lambda: theta_gl_odd(comps, pi),
        "gl-odd-phi": lambda: theta_gl_odd_phi(comps, u, pi),
    }[variant]().value
    ok_value = closed == chi_total
    inputs = {"variant": variant, "n": n, "q": tower.q, "u": tower.base.name(u), "precision": precision}
    values = {
        "passing": len(passing),
        "expected": len(expected),
        "sets_equal": ok_set,
        "matrix_sum": chi_total,
        "closed_form": closed,
    }
    reason = None
    if not ok_set:
        reason = "representative set mismatch"
    elif not ok_value:
        reason = "matrix-level sum differs from the closed form"
    return VerifyReport("torus-representatives", inputs, verdict(ok_set and ok_value), values, reason)


# -- closed form versus brute force over families and random inputs -----------------

OPERATIONS = ("gl-even", "gl-even-phi", "gl-odd", "gl-odd-phi", "u-even", "u-odd")


def _random_u_comps(tower: QuadExt, odd: bool, n: int, rng) -> list[int]:
    E = tower.ext
    comps = [rng.randrange(E.q) for _ in range(n if odd else n - 1)]
    if odd:
        comps.append(E.mul(tower.eps.code, tower.embed_code(rng.randrange(tower.q))))
    else:
        comps += [tower.embed_code(rng.randrange(tower.q)) for _ in range(2)]
    return comps


def _oracle_inputs(tower: QuadExt, op: str, n: int, samples: int, seed: int) -> Iterator[tuple[str, list[int], int]]:
    """(source, components, u) triples: witness family first, then random tuples."""
    import random

    E = tower.ext
    odd = op.endswith("odd") or op.startswith("gl-odd")
    inv_eps = E.inv(tower.eps.code)
    for u in range(1, tower.q):
        ue = tower.embed_code(u)
        if op.startswith("gl"):
            N = 2 * n + (1 if odd else 0)
            yield "witness", [1] * (N - 1) + [E.mul(inv_eps, ue) if odd else ue], u
        else:
            two = E.from_int(2)
            yield "witness", [two] * n + [E.mul(two, E.mul(inv_eps, ue) if odd else ue)], u
    rng = random.Random(f"{seed}:{op}:{tower.q}:{n}")
    for _ in range(samples):
        if op.startswith("gl"):
            N = 2 * n + (1 if odd else 0)
            yield "random", [rng.randrange(E.q) for _ in range(N)], rng.randrange(1, tower.q)
        else:
            yield "random", _random_u_comps(tower, odd, n, rng), rng.randrange(1, tower.q)


def oracle_check(tower: QuadExt, op: str, n: int, samples: int = 100, seed: int = 0, max_tries: int = 100_000) -> VerifyReport:
    """closed ≡ brute for ``samples`` generic random inputs plus the witness family.

    Characters vary with the input: ζ = ±1, ω or ω′ and a central z are drawn
    from the same seeded stream.
    """
    import random

    if op not in OPERATIONS:
        raise SscError(f"unknown operation {op!r}")
    E = tower.ext
    rng = random.Random(f"chars:{seed}:{op}:{tower.q}:{n}")
    u1 = [E.exp((tower.q - 1) * i) for i in range(tower.q + 1)]
    rows = []
    ok = True
    generic_random = 0
    tries = 0
    for source, comps, u in _oracle_inputs(tower, op, n, max_tries, seed):
        if source == "random" and generic_random >= samples:
            break
        tries += 1
        j = rng.randrange(tower.q + 1)
        zeta = rng.choice((1, -1))
        z = rng.choice(list(E._exp))
        try:
            if op.startswith("gl"):
                from .chars import omega_from_u1

                omega = omega_from_u1(tower, U1Char(tower, j))
                odd = op.startswith("gl-odd")
                pi = ssc_gl(tower, tower.eps.code if odd else 1, zeta, omega)
                fn = {"gl-even": theta_gl_even, "gl-even-phi": theta_gl_even_phi, "gl-odd": theta_gl_odd, "gl-odd-phi": theta_gl_odd_phi}[op]
                args = (u,) if op.endswith("-phi") else ()
                closed = fn(comps, *args, pi, "closed", z=z).value
                brute = fn(comps, *args, pi, "brute", z=z).value
            else:
                odd = op == "u-odd"
                b = rng.randrange(1, tower.q)
                pi_u = ssc_u(tower, b, U1Char(tower, j), odd, n)
                zu = rng.choice(u1)
                fn = theta_u_odd if odd else theta_u_even
                closed = fn(comps, pi_u, "closed", z=zu).value
                brute = fn(comps, pi_u, "brute", z=zu).value
        except NotGeneric:
            continue
        if source == "random":
            generic_random += 1
        equal = closed == brute
        ok = ok and equal
        if not equal:
            rows.append({"source": source, "comps": [E.name(c) for c in comps], "u": u, "closed": closed, "brute": brute})
    if generic_random < samples:
        ok = False
        rows.append({"reason": f"only {generic_random} generic samples found"})
    inputs = {"operation": op, "q": tower.q, "n": n, "samples": samples, "seed": seed}
    return VerifyReport("closed-vs-brute", inputs, verdict(ok), {"random_generic": generic_random}, rows=rows)
