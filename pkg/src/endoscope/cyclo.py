"""Exact arithmetic in Z[ζ_M].

A value is stored as its integer coefficient vector modulo the M-th
cyclotomic polynomial, so equality of vectors is equality of numbers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence


class CycloError(ValueError):
    pass


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_mul_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials, b monic."""
    a = list(a)
    if b[-1] != 1:
        raise CycloError("divisor must be monic")
    db = len(b) - 1
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            quot[i - db] = c
            for j, bc in enumerate(b):
                a[i - db + j] -= c * bc
    if any(a[:db]):
        raise CycloError("division is not exact")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """Φ_M as a coefficient tuple, low degree first, by dividing x^M - 1."""
    if M < 1:
        raise CycloError("order must be positive")
    poly = [-1] + [0] * (M - 1) + [1]
    for d in _divisors(M)[:-1]:
        poly = _poly_divexact_int(poly, cyclotomic_poly(d))
    return tuple(poly)


def _check_product(M: int) -> None:
    prod = [1]
    for d in _divisors(M):
        prod = _poly_mul_int(prod, cyclotomic_poly(d))
    if prod != [-1] + [0] * (M - 1) + [1]:  # pragma: no cover
        raise CycloError(f"cyclotomic factorisation check failed for M={M}")


class CycRing:
    """Z[ζ_M] with basis 1, ζ, ..., ζ^{dim-1}."""

    def __init__(self, M: int):
        self.M = M
        self.phi = cyclotomic_poly(M)
        _check_product(M)
        self.dim = len(self.phi) - 1
        # canonical vectors of ζ^k for 0 <= k < M
        d = self.dim
        table: list[tuple[int, ...]] = []
        cur = [0] * d
        cur[0] = 1
        for _ in range(M):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(d):
                    cur[i] -= top * self.phi[i]
        self._powers = table

    def __repr__(self) -> str:
        return f"CycRing(M={self.M})"

    def __reduce__(self):
        return (cyc_ring, (self.M,))

    # constructors
    def zero(self) -> CycNum:
        return CycNum(self, (0,) * self.dim)

    def one(self) -> CycNum:
        return self.root_of_unity(0)

    def from_int(self, n: int) -> CycNum:
        v = [0] * self.dim
        v[0] = n
        return CycNum(self, tuple(v))

    def root_of_unity(self, k: int) -> CycNum:
        return CycNum(self, self._powers[k % self.M])

    def from_exponent_counts(self, counts: Mapping[int, int] | Sequence[int], order: int | None = None) -> CycNum:
        """Σ counts[k]·ζ_order^k, with order dividing M (default M)."""
        order = self.M if order is None else order
        if self.M % order:
            raise CycloError(f"ζ_{order} does not live in Z[ζ_{self.M}]")
        step = self.M // order
        items = counts.items() if isinstance(counts, Mapping) else enumerate(counts)
        acc = [0] * self.dim
        for k, c in items:
            if c:
                vec = self._powers[(k * step) % self.M]
                for i, x in enumerate(vec):
                    if x:
                        acc[i] += c * x
        return CycNum(self, tuple(acc))

    def _reduce(self, poly: Sequence[int]) -> tuple[int, ...]:
        d = self.dim
        acc = list(poly[:d]) + [0] * max(0, d - len(poly))
        for k in range(d, len(poly)):
            c = poly[k]
            if c:
                vec = self._powers[k % self.M]
                for i, x in enumerate(vec):
                    if x:
                        acc[i] += c * x
        return tuple(acc)

    def coerce(self, x: CycNum) -> CycNum:
        """Map x ∈ Z[ζ_m] into this ring when m divides M."""
        if x.ring is self:
            return x
        if self.M % x.ring.M:
            raise CycloError(f"Z[ζ_{x.ring.M}] does not embed in Z[ζ_{self.M}]")
        step = self.M // x.ring.M
        return self.from_exponent_counts({i * step: c for i, c in enumerate(x.coeffs) if c})


@lru_cache(maxsize=None)
def cyc_ring(M: int) -> CycRing:
    return CycRing(M)


@dataclass(frozen=True)
class CycNum:
    ring: CycRing
    coeffs: tuple[int, ...]

    def _same(self, other: CycNum) -> None:
        if other.ring is not self.ring:
            raise CycloError(f"operands in Z[ζ_{self.ring.M}] and Z[ζ_{other.ring.M}]")

    def __add__(self, other: CycNum | int) -> CycNum:
        if isinstance(other, int):
            other = self.ring.from_int(other)
        self._same(other)
        return CycNum(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other: CycNum | int) -> CycNum:
        return self + (-other)

    def __rsub__(self, other: int) -> CycNum:
        return (-self) + other

    def __mul__(self, other: CycNum | int) -> CycNum:
        if isinstance(other, int):
            return self.int_scale(other)
        self._same(other)
        return CycNum(self.ring, self.ring._reduce(_poly_mul_int(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def int_scale(self, k: int) -> CycNum:
        return CycNum(self.ring, tuple(k * a for a in self.coeffs))

    def __pow__(self, e: int) -> CycNum:
        if e < 0:
            raise CycloError("negative powers are not supported")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def equals(self, other: CycNum) -> bool:
        self._same(other)
        return self.coeffs == other.coeffs

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.coeffs == self.ring.from_int(other).coeffs
        if isinstance(other, CycNum):
            return self.ring.M == other.ring.M and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring.M, self.coeffs))

    def conjugate(self) -> CycNum:
        """Complex conjugation ζ ↦ ζ^{-1}."""
        return self.ring.from_exponent_counts({(-i) % self.ring.M: c for i, c in enumerate(self.coeffs) if c})

    def complex_approx(self) -> complex:
        z = cmath.exp(2j * math.pi / self.ring.M)
        return complex(sum(c * z**i for i, c in enumerate(self.coeffs) if c))

    @cached_property
    def as_int(self) -> int | None:
        """The integer value if this number is rational, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __repr__(self) -> str:
        if self.as_int is not None:
            return str(self.as_int)
        z = self.complex_approx()
        return f"CycNum(M={self.ring.M}, ≈{z.real:.6f}{z.imag:+.6f}i)"


def root_of_unity(ring: CycRing, k: int) -> CycNum:
    return ring.root_of_unity(k)


def total(values: Iterable[CycNum], ring: CycRing) -> CycNum:
    acc = [0] * ring.dim
    for v in values:
        for i, c in enumerate(v.coeffs):
            acc[i] += c
    return CycNum(ring, tuple(acc))


def to_json(x: CycNum) -> dict:
    z = x.complex_approx()
    return {"M": x.ring.M, "coeffs": list(x.coeffs), "approx": [round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0]}
