"""Gauss sums, generalized Kloosterman sums and the identities between them.

Kl_a^{n,m}(ψ) sums ψ∘Tr(t_1+...+t_n)·ψ(s_1+...+s_m) over t_i ∈ k_E^×,
s_j ∈ k_F^× with Nr(t_1)...Nr(t_n)·s_1...s_m = a.  Every term is a power of
ζ_p, so the sums are accumulated as integer histograms of ζ_p-exponents and
converted to a CycNum once at the end.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .chars import AddChar, MultChar, enumerate_characters
from .cyclo import CycNum, CycRing, cyc_ring
from .gf import FqElem, FqField, QuadExt
from .report import FAIL, PASS, VerifyReport, compare

METHODS = ("convolve", "direct", "direct-t")


class SumError(ValueError):
    pass


class CorollaryFalsified(AssertionError):
    """An identity that the theory guarantees failed to hold."""


def value_ring(tower: QuadExt) -> CycRing:
    """Z[ζ_M] with M = lcm(p, |k_E^×|); holds every character value of the tower."""
    return cyc_ring(math.lcm(tower.p, tower.ext.q - 1))


def gauss_sum(field: FqField, chi: MultChar, psi: AddChar, ring: CycRing | None = None) -> CycNum:
    """G(k; χ, ψ) = Σ_{t ∈ k^×} χ(t)ψ(t)."""
    if psi.is_trivial:
        raise SumError("Gauss sum needs a nontrivial additive character")
    if chi.field is not field or psi.field is not field:
        raise SumError("characters must live on the given field")
    ring = ring or cyc_ring(math.lcm(field.p, field.q - 1))
    sm, sa = ring.M // chi.order, ring.M // psi.order
    counts = [0] * ring.M
    for t in range(1, field.q):
        counts[(chi.exponent_code(t) * sm + psi.exponent_code(t) * sa) % ring.M] += 1
    return ring.from_exponent_counts(counts)


# -- Kloosterman sums ----------------------------------------------------------


@dataclass(frozen=True)
class KlSpec:
    tower: QuadExt
    psi: AddChar
    n: int
    m: int
    a: int  # code in k_F^×

    def __post_init__(self) -> None:
        if self.n < 0 or self.m < 0:
            raise SumError("n and m must be non-negative")
        if self.a == 0:
            raise SumError("Kloosterman sums need a ≠ 0")
        if self.psi.field is not self.tower.base:
            raise SumError("ψ must be a character of k_F")


def _variable_profiles(tower: QuadExt, psi: AddChar) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """(log_F Nr(t), ψ∘Tr-exponent) for t ∈ k_E^×, and (log_F s, ψ-exponent) for s ∈ k_F^×."""
    F, E = tower.base, tower.ext
    psi_e = psi.compose_trace(tower)
    e_prof = [(F.log(tower.norm_code(t)), psi_e.exponent_code(t)) for t in range(1, E.q)]
    f_prof = [(F.log(s), psi.exponent_code(s)) for s in range(1, F.q)]
    return e_prof, f_prof


def _hist(prof: list[tuple[int, int]], qm1: int, p: int) -> list[list[int]]:
    h = [[0] * p for _ in range(qm1)]
    for lg, e in prof:
        h[lg][e] += 1
    return h


def _convolve(x: list[list[int]], y: list[list[int]], qm1: int, p: int) -> list[list[int]]:
    out = [[0] * p for _ in range(qm1)]
    for l1, row1 in enumerate(x):
        for e1, c1 in enumerate(row1):
            if not c1:
                continue
            for l2, row2 in enumerate(y):
                dst = out[(l1 + l2) % qm1]
                for e2, c2 in enumerate(row2):
                    if c2:
                        dst[(e1 + e2) % p] += c1 * c2
    return out


@lru_cache(maxsize=None)
def _kl_histograms(tower: QuadExt, psi: AddChar, n: int, m: int) -> tuple[tuple[int, ...], ...]:
    """hist[log a][e] = #{terms with product a and exponent e}, by convolution."""
    qm1, p = tower.q - 1, tower.p
    acc = [[0] * p for _ in range(qm1)]
    acc[0][0] = 1
    e_prof, f_prof = _variable_profiles(tower, psi)
    he, hf = _hist(e_prof, qm1, p), _hist(f_prof, qm1, p)
    for _ in range(n):
        acc = _convolve(acc, he, qm1, p)
    for _ in range(m):
        acc = _convolve(acc, hf, qm1, p)
    return tuple(tuple(row) for row in acc)


def _kl_direct(spec: KlSpec, eliminate: str) -> list[int]:
    """Histogram of ζ_p-exponents by looping over the free variables.

    ``eliminate='s'`` solves the constraint for s_m; ``'t'`` sums t_n over the
    norm fibre.  Falls back to the other choice when the variable is absent.
    """
    tower, n, m = spec.tower, spec.n, spec.m
    qm1, p = tower.q - 1, tower.p
    F = tower.base
    la = F.log(spec.a)
    hist = [0] * p
    if n == 0 and m == 0:
        if la == 0:
            hist[0] = 1
        return hist
    e_prof, f_prof = _variable_profiles(tower, spec.psi)
    f_by_log = {lg: e for lg, e in f_prof}
    if eliminate == "t" and n == 0:
        eliminate = "s"
    if eliminate == "s" and m == 0:
        eliminate = "t"
    if eliminate == "s":
        for ts in itertools.product(e_prof, repeat=n):
            lt = sum(x for x, _ in ts)
            et = sum(e for _, e in ts)
            for ss in itertools.product(f_prof, repeat=m - 1):
                rest = (la - lt - sum(x for x, _ in ss)) % qm1
                hist[(et + sum(e for _, e in ss) + f_by_log[rest]) % p] += 1
        return hist
    fibres: list[list[int]] = [[] for _ in range(qm1)]
    for lg, e in e_prof:
        fibres[lg].append(e)
    for ts in itertools.product(e_prof, repeat=n - 1):
        lt = sum(x for x, _ in ts)
        et = sum(e for _, e in ts)
        for ss in itertools.product(f_prof, repeat=m):
            rest = (la - lt - sum(x for x, _ in ss)) % qm1
            base = et + sum(e for _, e in ss)
            for e in fibres[rest]:
                hist[(base + e) % p] += 1
    return hist


def kl_term_count(tower: QuadExt, n: int, m: int) -> int:
    """Number of terms in one Kl_a^{n,m}."""
    if n == 0 and m == 0:
        return 1
    return (tower.ext.q - 1) ** n * (tower.q - 1) ** m // (tower.q - 1)


def kloosterman(spec: KlSpec, method: str = "convolve") -> CycNum:
    """Kl_a^{n,m}(ψ; k_E/k_F) in Z[ζ_p]."""
    ring = cyc_ring(spec.tower.p)
    if method == "convolve":
        if spec.n == 0 and spec.m == 0:
            return ring.from_int(1 if spec.a == 1 else 0)
        hist = _kl_histograms(spec.tower, spec.psi, spec.n, spec.m)[spec.tower.base.log(spec.a)]
    elif method == "direct":
        hist = _kl_direct(spec, "s")
    elif method == "direct-t":
        hist = _kl_direct(spec, "t")
    else:
        raise SumError(f"unknown method {method!r}")
    return ring.from_exponent_counts(hist)


def kl(tower: QuadExt, n: int, m: int, a: int | FqElem, psi: AddChar | None = None, method: str = "convolve") -> CycNum:
    """Shorthand for kloosterman(KlSpec(...)); ψ defaults to b = 1."""
    psi = psi or AddChar(tower.base, 1)
    code = a.code if isinstance(a, FqElem) else a
    return kloosterman(KlSpec(tower, psi, n, m, code), method)


def kl_table(tower: QuadExt, psi: AddChar, n: int, m: int, method: str = "convolve") -> list[CycNum]:
    """Kl_a^{n,m} for a = g_F^0, g_F^1, ... (generator-power order)."""
    return [kloosterman(KlSpec(tower, psi, n, m, a), method) for a in tower.base._exp]


def kl_fourier(tower: QuadExt, psi: AddChar, n: int, m: int, chi: MultChar, method: str = "convolve") -> tuple[CycNum, CycNum]:
    """(Σ_a χ(a)·Kl_a^{n,m}, G(k_E;χ∘Nr,ψ∘Tr)^n·G(k_F;χ,ψ)^m)."""
    ring = value_ring(tower)
    F, E = tower.base, tower.ext
    lhs = ring.zero()
    for a in range(1, F.q):
        lhs = lhs + chi.eval(FqElem(F, a), ring) * ring.coerce(kloosterman(KlSpec(tower, psi, n, m, a), method))
    g_e = gauss_sum(E, chi.compose_norm(tower), psi.compose_trace(tower), ring)
    g_f = gauss_sum(F, chi, psi, ring)
    return lhs, g_e**n * g_f**m


def verify_kl_fourier(tower: QuadExt, psi: AddChar, n: int, m: int, chi: MultChar, method: str = "convolve") -> VerifyReport:
    lhs, rhs = kl_fourier(tower, psi, n, m, chi, method)
    inputs = {"p": tower.p, "f": tower.f, "r": tower.r, "n": n, "m": m, "chi": chi.j, "psi": psi.label}
    return compare("kl_fourier", inputs, lhs, rhs)


def verify_hasse_davenport(tower: QuadExt, chi: MultChar, psi: AddChar) -> VerifyReport:
    """G(k_E; χ∘Nr, ψ∘Tr) = (-1)^{r-1}·G(k_F; χ, ψ)^r."""
    ring = value_ring(tower)
    lhs = gauss_sum(tower.ext, chi.compose_norm(tower), psi.compose_trace(tower), ring)
    rhs = gauss_sum(tower.base, chi, psi, ring) ** tower.r * (-1) ** (tower.r - 1)
    inputs = {"p": tower.p, "f": tower.f, "r": tower.r, "chi": chi.j, "psi": psi.label}
    return compare("hasse_davenport", inputs, lhs, rhs)


def verify_hd_kl(tower: QuadExt, psi: AddChar, n: int, a: int, method: str = "convolve") -> VerifyReport:
    """Kl_a^{n,r} = (-1)^{r-1}·Kl_a^{n+1,0}, r the relative degree of the tower."""
    lhs = kloosterman(KlSpec(tower, psi, n, tower.r, a), method)
    rhs = kloosterman(KlSpec(tower, psi, n + 1, 0, a), method) * (-1) ** (tower.r - 1)
    inputs = {"p": tower.p, "f": tower.f, "r": tower.r, "n": n, "a": tower.base.name(a), "psi": psi.label}
    return compare("kl_collapse", inputs, lhs, rhs)


def kl_nonconstancy_witness(tower: QuadExt, psi: AddChar, n: int, m: int) -> tuple[int, int]:
    """Codes a1, a2 ∈ k_F^× with Kl_{a1} ≠ Kl_{a2}."""
    if tower.q < 3:  # pragma: no cover - p is odd, so q >= 3 always
        raise SumError("needs q >= 3")
    units = list(tower.base._exp)
    first = kloosterman(KlSpec(tower, psi, n, m, units[0]))
    for a in units[1:]:
        if kloosterman(KlSpec(tower, psi, n, m, a)) != first:
            return units[0], a
    raise CorollaryFalsified(f"Kl^{{{n},{m}}} is constant on k_F^×")


def kl_nonzero_witness(tower: QuadExt, psi: AddChar, n: int, m: int) -> int:
    for a in tower.base._exp:
        if not kloosterman(KlSpec(tower, psi, n, m, a)).is_zero():
            return a
    raise CorollaryFalsified(f"Kl^{{{n},{m}}} vanishes on k_F^×")


EQUAL_PARAMETERS = "equal parameters"


def distinguish(tower: QuadExt, psi: AddChar, n: int, m: int, a: int, b: int) -> int | str:
    """t ∈ k_F^× with Kl_{ta} ≠ Kl_{tb}, or EQUAL_PARAMETERS when a = b."""
    if a == 0 or b == 0:
        raise SumError("parameters must be nonzero")
    if a == b:
        return EQUAL_PARAMETERS
    F = tower.base
    for t in F._exp:
        if kloosterman(KlSpec(tower, psi, n, m, F.mul(t, a))) != kloosterman(KlSpec(tower, psi, n, m, F.mul(t, b))):
            return t
    raise CorollaryFalsified(f"no t separates a={F.name(a)} and b={F.name(b)}")


def appendix_suite(p: int, f: int = 1, max_n: int = 2, max_total: int = 4, psi_b: int = 1) -> list[VerifyReport]:
    """Hasse-Davenport for r = 2, 3; Fourier identity for n+m ≤ max_total;
    collapse for n ≤ max_n; non-constancy, non-vanishing and distinguishing."""
    from .gf import make_tower

    reports: list[VerifyReport] = []
    for r in (2, 3):
        try:
            tw = make_tower(p, f, r)
        except ValueError as exc:
            reports.append(VerifyReport("hasse_davenport", {"p": p, "f": f, "r": r}, "skipped", reason=str(exc)))
            continue
        psi = AddChar(tw.base, psi_b)
        for chi in enumerate_characters(tw.base):
            reports.append(verify_hasse_davenport(tw, chi, psi))
        for n in range(max_n + 1):
            for a in tw.base._exp:
                reports.append(verify_hd_kl(tw, psi, n, a))
    tw = make_tower(p, f, 2)
    psi = AddChar(tw.base, psi_b)
    for total in range(1, max_total + 1):
        for n in range(total + 1):
            for chi in enumerate_characters(tw.base):
                reports.append(verify_kl_fourier(tw, psi, n, total - n, chi))
    for n in range(max_n + 1):
        for m in range(max_n + 1):
            if n + m == 0:
                continue
            inputs = {"p": p, "f": f, "n": n, "m": m}
            try:
                a1, a2 = kl_nonconstancy_witness(tw, psi, n, m)
                a0 = kl_nonzero_witness(tw, psi, n, m)
                rep = VerifyReport("kl_witnesses", inputs, PASS, {"nonconstant": [tw.base.name(a1), tw.base.name(a2)], "nonzero": tw.base.name(a0)})
            except CorollaryFalsified as exc:
                rep = VerifyReport("kl_witnesses", inputs, FAIL, reason=str(exc))
            reports.append(rep)
            try:
                found = {}
                for a in tw.base._exp:
                    for b in tw.base._exp:
                        if a != b:
                            found[f"{tw.base.name(a)},{tw.base.name(b)}"] = tw.base.name(distinguish(tw, psi, n, m, a, b))
                rep = VerifyReport("kl_distinguish", inputs, PASS, {"t": found})
            except CorollaryFalsified as exc:
                rep = VerifyReport("kl_distinguish", inputs, FAIL, reason=str(exc))
            reports.append(rep)
    return reports
