"""Truncated model of the unramified tower F ⊂ E and matrices over it.

O_E/p^k is presented as (Z/p^k)[x]/(m(x)) where m is the integer lift of
the k_E modulus; ϖ = p.  Elements carry capped relative precision: a nonzero
element is p^v · u with u a unit known modulo p^rel (rel ≤ k), so its
absolute precision is v + rel.  Zeros are either exact (structural zeros in
matrices) or known only modulo some p^P.

Predicates that cannot be decided at the available precision raise
InsufficientPrecision; valuations below the window raise WindowOverflow.
Nothing is silently truncated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

from .gf import FqElem, QuadExt


class PadicError(ValueError):
    pass


class WindowOverflow(PadicError):
    pass


class InsufficientPrecision(PadicError):
    pass


class SingularMatrix(PadicError):
    pass


# -- polynomial helpers over Z/p^e modulo a monic m --------------------------


def _pmul(a: Sequence[int], b: Sequence[int], m: Sequence[int], mod: int) -> tuple[int, ...]:
    d = len(m) - 1
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for i in range(len(prod) - 1, d - 1, -1):
        c = prod[i]
        if c:
            for j in range(d + 1):
                prod[i - d + j] -= c * m[j]
    return tuple(c % mod for c in prod[:d])


def _padd(a: Sequence[int], b: Sequence[int], mod: int) -> tuple[int, ...]:
    return tuple((x + y) % mod for x, y in zip(a, b))


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class LocalRing:
    """O_E/p^k with Galois conjugation, Teichmüller lifts and a valuation window."""

    def __init__(self, tower: QuadExt, k: int = 4, window_low: int = -2):
        tower._need_quadratic()
        if k < 1:
            raise PadicError("precision must be positive")
        if window_low > 0:
            raise PadicError("window_low must be <= 0")
        self.tower = tower
        self.p = tower.p
        self.k = k
        self.window_low = window_low
        self.m = tower.ext.modulus
        self.d = len(self.m) - 1
        self.pk = self.p**k
        self.teich_order = tower.ext.q  # t̂ = lim t^{Q^j}
        self._conj_powers = self._lift_conj()
        self._zero = LocalElem(self, 0, None, None)

    def __repr__(self) -> str:
        return f"LocalRing(p={self.p}, f={self.tower.f}, k={self.k}, window_low={self.window_low})"

    def __reduce__(self):
        return (local_ring, (self.tower.p, self.tower.f, self.k, self.window_low))

    # raw unit arithmetic
    def _one_poly(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.d - 1)

    def _ppow(self, a: Sequence[int], e: int, mod: int) -> tuple[int, ...]:
        result = self._one_poly()
        base = tuple(a)
        while e:
            if e & 1:
                result = _pmul(result, base, self.m, mod)
            base = _pmul(base, base, self.m, mod)
            e >>= 1
        return result

    def _residue_code(self, poly: Sequence[int]) -> int:
        return self.tower.ext.from_digits([c % self.p for c in poly])

    def _lift_code(self, code: int) -> tuple[int, ...]:
        return tuple(self.tower.ext.digits(code))

    def _unit_inverse(self, poly: Sequence[int], rel: int) -> tuple[int, ...]:
        code = self._residue_code(poly)
        if code == 0:
            raise PadicError("not a unit")
        mod = self.p**rel
        y = self._lift_code(self.tower.ext.inv(code))
        two = (2,) + (0,) * (self.d - 1)
        prec = 1
        while prec < rel:
            prec *= 2
            uy = _pmul(poly, y, self.m, mod)
            y = _pmul(y, tuple((t - s) % mod for t, s in zip(two, uy)), self.m, mod)
        return tuple(c % mod for c in y)

    def _eval_m(self, r: Sequence[int], mod: int) -> tuple[int, ...]:
        acc = (0,) * self.d
        for coeff in reversed(self.m):
            acc = _pmul(acc, r, self.m, mod)
            acc = tuple((x + (coeff if i == 0 else 0)) % mod for i, x in enumerate(acc))
        return acc

    def _eval_dm(self, r: Sequence[int], mod: int) -> tuple[int, ...]:
        dm = [i * c for i, c in enumerate(self.m)][1:]
        acc = (0,) * self.d
        for coeff in reversed(dm):
            acc = _pmul(acc, r, self.m, mod)
            acc = tuple((x + (coeff if i == 0 else 0)) % mod for i, x in enumerate(acc))
        return acc

    def _lift_conj(self) -> list[tuple[int, ...]]:
        """Powers r^i (i < d) of the Hensel-lifted root r ≡ x^q of m."""
        mod = self.pk
        x = (0, 1) + (0,) * (self.d - 2) if self.d > 1 else (0,)
        r = self._ppow(x, self.tower.q, self.p) if self.d > 1 else (0,)
        for _ in range(self.k + 1):
            fr = self._eval_m(r, mod)
            if not any(fr):
                break
            inv = self._unit_inverse(self._eval_dm(r, mod), self.k)
            r = tuple((a - b) % mod for a, b in zip(r, _pmul(fr, inv, self.m, mod)))
        if any(self._eval_m(r, mod)):  # pragma: no cover
            raise PadicError("Hensel lift of the conjugation root failed")
        powers = [self._one_poly()]
        for _ in range(1, self.d):
            powers.append(_pmul(powers[-1], r, self.m, mod))
        # involution check: σ(σ(x)) = x
        if self.d > 1 and self._apply_conj(self._apply_conj_with(powers, x, mod), mod, powers) != tuple(c % mod for c in x):
            raise PadicError("lifted conjugation is not an involution")  # pragma: no cover
        return powers

    @staticmethod
    def _apply_conj_with(powers: list[tuple[int, ...]], poly: Sequence[int], mod: int) -> tuple[int, ...]:
        acc = [0] * len(powers[0])
        for c, pw in zip(poly, powers):
            if c:
                for i, x in enumerate(pw):
                    acc[i] += c * x
        return tuple(a % mod for a in acc)

    def _apply_conj(self, poly: Sequence[int], mod: int, powers: list[tuple[int, ...]] | None = None) -> tuple[int, ...]:
        return self._apply_conj_with(powers or self._conj_powers, poly, mod)

    @lru_cache(maxsize=None)
    def _teich_poly(self, code: int) -> tuple[int, ...]:
        if code == 0:
            raise PadicError("Teichmüller lift of 0")
        y = self._lift_code(code)
        for _ in range(self.k):
            y = self._ppow(y, self.teich_order, self.pk)
        return y

    # element constructors
    def zero(self) -> LocalElem:
        return self._zero

    def one(self) -> LocalElem:
        return self.from_int(1)

    def from_int(self, n: int) -> LocalElem:
        if n == 0:
            return self._zero
        v = _vp(n, self.p)
        return _make(self, v, (n // self.p**v,) + (0,) * (self.d - 1), v + self.k)

    def uniformizer(self) -> LocalElem:
        return self.from_int(self.p)

    def pi_power(self, e: int) -> LocalElem:
        if e < self.window_low:
            raise WindowOverflow(f"ϖ^{e} is below the window")
        return LocalElem(self, e, self._one_poly(), e + self.k)

    def teichmuller(self, x: FqElem | int) -> LocalElem:
        """Teichmüller lift of a residue (k_F elements are embedded first)."""
        code = self._ext_code(x)
        if code == 0:
            return self._zero
        return LocalElem(self, 0, self._teich_poly(code), self.k)

    def lift(self, x: FqElem | int) -> LocalElem:
        """Naive digit lift of a residue (not multiplicative)."""
        code = self._ext_code(x)
        if code == 0:
            return self._zero
        return LocalElem(self, 0, self._lift_code(code), self.k)

    def _ext_code(self, x: FqElem | int) -> int:
        if isinstance(x, int):
            return x
        if x.field is self.tower.ext:
            return x.code
        if x.field is self.tower.base:
            return self.tower.embed_code(x.code)
        raise PadicError("residue from an unrelated field")

    def residue_elem(self, code: int) -> FqElem:
        return FqElem(self.tower.ext, code)


@lru_cache(maxsize=None)
def local_ring(p: int, f: int = 1, k: int = 4, window_low: int = -2) -> LocalRing:
    from .gf import make_tower

    return LocalRing(make_tower(p, f, 2), k, window_low)


def _make(ring: LocalRing, v: int, poly: Sequence[int], P: int) -> LocalElem:
    """Normalise p^v·poly known modulo p^P."""
    if P < ring.window_low:
        raise WindowOverflow(f"precision p^{P} is below the window")
    if P <= v:
        return LocalElem(ring, P, None, P)
    p = ring.p
    mod = p ** (P - v)
    poly = [c % mod for c in poly]
    if not any(poly):
        return LocalElem(ring, P, None, P)
    e = min(_vp(c, p) for c in poly if c)
    if e:
        poly = [c // p**e for c in poly]
        v += e
    if v < ring.window_low:
        raise WindowOverflow(f"valuation {v} is below the window [{ring.window_low}, ...)")
    rel = min(P - v, ring.k)
    mod = p**rel
    return LocalElem(ring, v, tuple(c % mod for c in poly), v + rel)


class LocalElem:
    """p^val · unit, known modulo p^prec.

    unit is None for zeros; prec is None for an exact zero.
    """

    __slots__ = ("ring", "val", "unit", "prec")

    def __init__(self, ring: LocalRing, val: int, unit: tuple[int, ...] | None, prec: int | None):
        self.ring = ring
        self.val = val
        self.unit = unit
        self.prec = prec

    # structure
    @property
    def is_exact_zero(self) -> bool:
        return self.prec is None

    @property
    def known_zero(self) -> bool:
        """Zero to the available precision (exact or not)."""
        return self.unit is None

    @property
    def rel(self) -> int:
        return 0 if self.unit is None else self.prec - self.val

    def valuation(self) -> int:
        """Exact valuation; raises for zeros."""
        if self.unit is None:
            raise InsufficientPrecision("valuation of an element indistinguishable from 0")
        return self.val

    def val_at_least(self, t: int) -> bool:
        if self.prec is None:
            return True
        if self.unit is None:
            if self.prec >= t:
                return True
            raise InsufficientPrecision(f"need precision p^{t}, have p^{self.prec}")
        return self.val >= t

    def is_unit(self) -> bool:
        if self.unit is None:
            if self.prec is not None and self.prec < 1:
                raise InsufficientPrecision("cannot decide unit-ness")
            return False
        return self.val == 0

    def residue(self) -> int:
        """Image in k_E (code) of an integral element."""
        if self.unit is None:
            if self.prec is None or self.prec >= 1:
                return 0
            raise InsufficientPrecision("residue needs precision ≥ 1")
        if self.val < 0:
            raise PadicError("residue of a non-integral element")
        if self.val > 0:
            return 0
        return self.ring._residue_code(self.unit)

    # arithmetic
    def _coerce(self, other: LocalElem | int) -> LocalElem:
        if isinstance(other, int):
            return self.ring.from_int(other)
        if other.ring is not self.ring:
            raise PadicError("elements of different local rings")
        return other

    def __add__(self, other: LocalElem | int) -> LocalElem:
        y = self._coerce(other)
        x = self
        if x.prec is None:
            return y
        if y.prec is None:
            return x
        P = min(x.prec, y.prec)
        if x.unit is None and y.unit is None:
            return _make(x.ring, P, (0,), P)
        if x.unit is None:
            x, y = y, x
        if y.unit is None:
            return _make(x.ring, x.val, x.unit, P)
        v = min(x.val, y.val)
        if P <= v:
            return _make(x.ring, P, (0,), P)
        p = x.ring.p
        sx, sy = p ** (x.val - v), p ** (y.val - v)
        poly = [a * sx + b * sy for a, b in zip(x.unit, y.unit)]
        return _make(x.ring, v, poly, P)

    __radd__ = __add__

    def __neg__(self) -> LocalElem:
        if self.unit is None:
            return self
        mod = self.ring.p**self.rel
        return LocalElem(self.ring, self.val, tuple((-c) % mod for c in self.unit), self.prec)

    def __sub__(self, other: LocalElem | int) -> LocalElem:
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> LocalElem:
        return self._coerce(other) + (-self)

    def __mul__(self, other: LocalElem | int) -> LocalElem:
        y = self._coerce(other)
        x = self
        if x.prec is None or y.prec is None:
            return x.ring._zero
        if x.unit is None or y.unit is None:
            # (p^P·w)·y ≡ 0 mod p^{P + val y}
            if x.unit is None and y.unit is None:
                P = x.prec + y.prec
            elif x.unit is None:
                P = x.prec + y.val
            else:
                P = y.prec + x.val
            return _make(x.ring, P, (0,), P)
        v = x.val + y.val
        rel = min(x.rel, y.rel)
        if v < x.ring.window_low:
            raise WindowOverflow(f"valuation {v} is below the window")
        mod = x.ring.p**rel
        return LocalElem(x.ring, v, _pmul(x.unit, y.unit, x.ring.m, mod), v + rel)

    __rmul__ = __mul__

    def inverse(self) -> LocalElem:
        if self.unit is None:
            if self.prec is None:
                raise ZeroDivisionError("inverse of exact zero")
            raise InsufficientPrecision("inverse of an element indistinguishable from 0")
        v = -self.val
        if v < self.ring.window_low:
            raise WindowOverflow(f"valuation {v} is below the window")
        return LocalElem(self.ring, v, self.ring._unit_inverse(self.unit, self.rel), v + self.rel)

    def __truediv__(self, other: LocalElem | int) -> LocalElem:
        return self * self._coerce(other).inverse()

    def shift(self, e: int) -> LocalElem:
        """Multiply by ϖ^e exactly."""
        if self.prec is None:
            return self
        if self.unit is None:
            return _make(self.ring, self.prec + e, (0,), self.prec + e)
        v = self.val + e
        if v < self.ring.window_low:
            raise WindowOverflow(f"valuation {v} is below the window")
        return LocalElem(self.ring, v, self.unit, self.prec + e)

    def conj(self) -> LocalElem:
        if self.unit is None:
            return self
        mod = self.ring.p**self.rel
        return LocalElem(self.ring, self.val, self.ring._apply_conj(self.unit, mod), self.prec)

    def equals(self, other: LocalElem | int) -> bool:
        """Equal to the jointly available precision."""
        return (self - self._coerce(other)).known_zero

    def __repr__(self) -> str:
        if self.prec is None:
            return "0"
        if self.unit is None:
            return f"O(ϖ^{self.prec})"
        return f"ϖ^{self.val}·{list(self.unit)}+O(ϖ^{self.prec})"

    def to_json(self) -> dict:
        if self.prec is None:
            return {"v": None, "u": []}
        if self.unit is None:
            return {"v": self.prec, "u": [], "prec": self.prec}
        return {"v": self.val, "u": list(self.unit), "prec": self.prec}


def elem_from_json(ring: LocalRing, obj: dict | int) -> LocalElem:
    """{"v": int, "u": [coeffs]} or a plain integer."""
    if isinstance(obj, int):
        return ring.from_int(obj)
    v = obj.get("v")
    u = list(obj.get("u", []))
    if v is None or not any(u):
        return ring.zero()
    u = (u + [0] * ring.d)[: ring.d]
    return _make(ring, int(v), u, int(v) + ring.k)


# -- matrices ------------------------------------------------------------------


class LocalMatrix:
    __slots__ = ("ring", "rows")

    def __init__(self, ring: LocalRing, rows: Sequence[Sequence[LocalElem]]):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise PadicError("matrices must be square")

    @property
    def n_size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> LocalElem:
        return self.rows[ij[0]][ij[1]]

    @classmethod
    def identity(cls, ring: LocalRing, n: int) -> LocalMatrix:
        one, zero = ring.one(), ring.zero()
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, ring: LocalRing, entries: Sequence[LocalElem]) -> LocalMatrix:
        zero = ring.zero()
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, ring: LocalRing, x: LocalElem, n: int) -> LocalMatrix:
        return cls.diag(ring, [x] * n)

    def map(self, fn: Callable[[LocalElem], LocalElem]) -> LocalMatrix:
        return LocalMatrix(self.ring, [[fn(x) for x in r] for r in self.rows])

    def __add__(self, other: LocalMatrix) -> LocalMatrix:
        return LocalMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: LocalMatrix) -> LocalMatrix:
        return LocalMatrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> LocalMatrix:
        return self.map(lambda x: -x)

    def scale(self, x: LocalElem) -> LocalMatrix:
        return self.map(lambda y: x * y)

    def __matmul__(self, other: LocalMatrix) -> LocalMatrix:
        n = self.n_size
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = self.ring.zero()
                for a, b in zip(r, c):
                    if a.prec is not None and b.prec is not None:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LocalMatrix(self.ring, out)

    def transpose(self) -> LocalMatrix:
        return LocalMatrix(self.ring, list(zip(*self.rows)))

    def conj(self) -> LocalMatrix:
        return self.map(LocalElem.conj)

    def equals(self, other: LocalMatrix) -> bool:
        return all(a.equals(b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def min_precision(self) -> int | None:
        precs = [x.prec for r in self.rows for x in r if x.prec is not None]
        return min(precs) if precs else None

    def inverse(self) -> LocalMatrix:
        """Gauss-Jordan elimination with a minimal-valuation pivot."""
        n = self.n_size
        ring = self.ring
        a = [list(r) + [ring.one() if i == j else ring.zero() for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            best = None
            for r in range(col, n):
                x = a[r][col]
                if x.unit is not None and (best is None or x.val < a[best][col].val):
                    best = r
            if best is None:
                if all(a[r][col].prec is None for r in range(col, n)):
                    raise SingularMatrix("matrix is singular")
                raise InsufficientPrecision("no pivot distinguishable from 0")
            a[col], a[best] = a[best], a[col]
            inv = a[col][col].inverse()
            a[col] = [inv * x for x in a[col]]
            for r in range(n):
                if r != col and a[r][col].prec is not None:
                    factor = a[r][col]
                    a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
        return LocalMatrix(ring, [row[n:] for row in a])

    def det(self) -> LocalElem:
        n = self.n_size
        a = [list(r) for r in self.rows]
        sign = 1
        result = self.ring.one()
        for col in range(n):
            best = None
            for r in range(col, n):
                x = a[r][col]
                if x.unit is not None and (best is None or x.val < a[best][col].val):
                    best = r
            if best is None:
                if all(a[r][col].prec is None for r in range(col, n)):
                    return self.ring.zero()
                raise InsufficientPrecision("determinant undecidable at this precision")
            if best != col:
                a[col], a[best] = a[best], a[col]
                sign = -sign
            piv = a[col][col]
            result = result * piv
            inv = piv.inverse()
            for r in range(col + 1, n):
                if a[r][col].prec is not None:
                    factor = a[r][col] * inv
                    a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
        return result if sign == 1 else -result

    def adjugate_inverse(self) -> LocalMatrix:
        """Inverse via cofactors; independent cross-check of ``inverse``."""
        n = self.n_size
        d = self.det()
        dinv = d.inverse()
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = LocalMatrix(self.ring, [[self.rows[r][c] for c in range(n) if c != i] for r in range(n) if r != j]) if n > 1 else None
                cof = minor.det() if minor is not None else self.ring.one()
                if (i + j) % 2:
                    cof = -cof
                row.append(cof * dinv)
            rows.append(row)
        return LocalMatrix(self.ring, rows)

    def __repr__(self) -> str:
        return "LocalMatrix(" + "; ".join(", ".join(map(repr, r)) for r in self.rows) + ")"

    def to_json(self) -> list:
        return [[x.to_json() for x in r] for r in self.rows]


def matrix_from_json(ring: LocalRing, rows: list) -> LocalMatrix:
    return LocalMatrix(ring, [[elem_from_json(ring, x) for x in r] for r in rows])


# -- the involution θ and norms ----------------------------------------------


def j_matrix(ring: LocalRing, n: int) -> LocalMatrix:
    """Antidiagonal J with J_{i, N+1-i} = (-1)^{i-1}."""
    zero = ring.zero()
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][n - 1 - i] = ring.from_int((-1) ** i)
    return LocalMatrix(ring, rows)


def theta(g: LocalMatrix) -> LocalMatrix:
    """θ(g) = J ᵗc(g)^{-1} J^{-1}."""
    n = g.n_size
    J = j_matrix(g.ring, n)
    Jinv = J if n % 2 else -J  # J^2 = (-1)^{N-1}
    return J @ g.inverse().conj().transpose() @ Jinv


def norm_elem(g: LocalMatrix) -> LocalMatrix:
    """N(g) = g θ(g)."""
    return g @ theta(g)


def theta_commutes(g: LocalMatrix) -> bool:
    t = theta(g)
    return (g @ t).equals(t @ g)


def is_unitary(h: LocalMatrix) -> bool:
    """ᵗc(h) J h = J to the available precision."""
    J = j_matrix(h.ring, h.n_size)
    return (h.conj().transpose() @ J @ h).equals(J)


def phi(ring: LocalRing, a: FqElem | int, n: int) -> LocalMatrix:
    """φ_a = (0, I_{N-1}; ϖâ, 0) with â the Teichmüller lift."""
    if ring._ext_code(a) == 0:
        raise PadicError("φ_a needs a ≠ 0")
    zero, one = ring.zero(), ring.one()
    rows = [[zero] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = one
    rows[n - 1][0] = ring.teichmuller(a).shift(1)
    return LocalMatrix(ring, rows)


def one_plus_phi(ring: LocalRing, a: FqElem | int, n: int) -> LocalMatrix:
    return LocalMatrix.identity(ring, n) + phi(ring, a, n)


def teich_diag(ring: LocalRing, codes: Sequence[FqElem | int]) -> LocalMatrix:
    return LocalMatrix.diag(ring, [ring.teichmuller(c) for c in codes])


def scalar_teich(ring: LocalRing, z: FqElem | int, n: int) -> LocalMatrix:
    return LocalMatrix.scalar(ring, ring.teichmuller(z), n)


# -- Iwahori filtration and affine components -----------------------------------

LEVELS = ("I++", "I+", "I", "outside")


def _in_I(g: LocalMatrix) -> bool:
    n = g.n_size
    for i in range(n):
        for j in range(n):
            x = g[i, j]
            if i == j:
                if not x.is_unit():
                    return False
            elif i < j:
                if not x.val_at_least(0):
                    return False
            elif not x.val_at_least(1):
                return False
    return True


def _in_I_plus(g: LocalMatrix) -> bool:
    one = g.ring.one()
    return _in_I(g) and all((g[i, i] - one).val_at_least(1) for i in range(g.n_size))


def _in_I_plus_plus(g: LocalMatrix) -> bool:
    n = g.n_size
    if not _in_I_plus(g):
        return False
    for i in range(n - 1):
        if not g[i, i + 1].val_at_least(1):
            return False
    return g[n - 1, 0].val_at_least(2)


def classify_iwahori(g: LocalMatrix, variant: str = "GL") -> str:
    """Deepest of I++ ⊂ I+ ⊂ I containing g, or 'outside'.

    For the unitary variant the GL shape is intersected with U(N).
    """
    if variant not in ("GL", "U"):
        raise PadicError(f"unknown variant {variant!r}")
    if g.ring.k < 2:
        raise InsufficientPrecision("classification needs precision ≥ 2")
    if variant == "U" and not is_unitary(g):
        return "outside"
    if not _in_I(g):
        return "outside"
    if not _in_I_plus(g):
        return "I"
    if not _in_I_plus_plus(g):
        return "I+"
    return "I++"


@dataclass(frozen=True)
class AffineComponents:
    variant: str  # "GL", "U-even" or "U-odd"
    comps: tuple[FqElem, ...]

    def to_json(self) -> dict:
        return {"variant": self.variant, "comps": [repr(c) for c in self.comps]}


def affine_components(g: LocalMatrix, variant: str = "GL") -> AffineComponents:
    """(x̄_12, ..., x̄_{N-1,N}, x̄_{N1}ϖ^{-1}) and its unitary restrictions."""
    if classify_iwahori(g, variant) not in ("I+", "I++"):
        raise PadicError("affine components need an element of I+")
    tower = g.ring.tower
    n = g.n_size
    E = tower.ext
    gl = [FqElem(E, g[i, i + 1].residue()) for i in range(n - 1)]
    gl.append(FqElem(E, g[n - 1, 0].shift(-1).residue()))
    if variant == "GL":
        return AffineComponents("GL", tuple(gl))
    half = n // 2
    if n % 2 == 0:
        mid, corner = gl[half - 1], gl[-1]
        if not (tower.in_base_code(mid.code) and tower.in_base_code(corner.code)):
            raise PadicError("unitary components are not in k_F")  # pragma: no cover
        return AffineComponents("U-even", tuple(gl[: half - 1]) + (tower.pullback(mid), tower.pullback(corner)))
    corner = gl[-1]
    if tower.trace_code(corner.code) != 0:
        raise PadicError("corner component is not trace-zero")  # pragma: no cover
    return AffineComponents("U-odd", tuple(gl[:half]) + (corner,))


def is_affine_generic(components: AffineComponents | Sequence[FqElem]) -> bool:
    comps = components.comps if isinstance(components, AffineComponents) else components
    return all(c.code != 0 for c in comps)


# -- characteristic polynomial and the Eisenstein test ---------------------------


def _poly_mul_local(a: list[LocalElem], b: list[LocalElem], zero: LocalElem) -> list[LocalElem]:
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.prec is None:
            continue
        for j, y in enumerate(b):
            if y.prec is not None:
                out[i + j] = out[i + j] + x * y
    return out


def charpoly_minors(g: LocalMatrix) -> list[LocalElem]:
    """det(xI - g) by Laplace expansion along rows with memoised column sets."""
    ring = g.ring
    n = g.n_size
    zero, one = ring.zero(), ring.one()

    def entry(i: int, j: int) -> list[LocalElem]:
        e = -g[i, j]
        return [e, one] if i == j else [e]

    @lru_cache(maxsize=None)
    def det(row: int, cols: int) -> tuple[LocalElem, ...]:
        if row == n:
            return (one,)
        acc: list[LocalElem] = [zero]
        sign = 1
        for j in range(n):
            if cols >> j & 1:
                ent = entry(row, j)
                if not all(x.prec is None for x in ent):
                    term = _poly_mul_local(ent, list(det(row + 1, cols & ~(1 << j))), zero)
                    if sign < 0:
                        term = [-x for x in term]
                    if len(term) > len(acc):
                        acc = acc + [zero] * (len(term) - len(acc))
                    acc = [acc[i] + (term[i] if i < len(term) else zero) for i in range(len(acc))]
                sign = -sign
        return tuple(acc)

    coeffs = list(det(0, (1 << n) - 1))
    coeffs += [zero] * (n + 1 - len(coeffs))
    return coeffs[: n + 1]


def charpoly_faddeev(g: LocalMatrix) -> list[LocalElem]:
    """Faddeev-LeVerrier; requires p > N so that 1..N are units."""
    ring = g.ring
    n = g.n_size
    if ring.p <= n:
        raise PadicError("Faddeev-LeVerrier needs p > N")
    coeffs = [ring.zero()] * (n + 1)
    coeffs[n] = ring.one()
    I = LocalMatrix.identity(ring, n)
    Mk = LocalMatrix.scalar(ring, ring.zero(), n)
    for k in range(1, n + 1):
        Mk = g @ Mk + I.scale(coeffs[n - k + 1])
        AM = g @ Mk
        tr = ring.zero()
        for i in range(n):
            tr = tr + AM[i, i]
        coeffs[n - k] = -(tr * ring.from_int(k).inverse())
    return coeffs


def charpoly(g: LocalMatrix) -> list[LocalElem]:
    """Coefficients c_0..c_N of det(xI - g), low degree first."""
    if g.ring.p > g.n_size:
        return charpoly_faddeev(g)
    return charpoly_minors(g)


def is_regular_elliptic(g: LocalMatrix) -> bool:
    """Char-poly of g - 1 is Eisenstein (so g is regular semisimple elliptic)."""
    if g.ring.k < 2:
        raise InsufficientPrecision("Eisenstein test needs precision ≥ 2")
    n = g.n_size
    cp = charpoly(g - LocalMatrix.identity(g.ring, n))
    if not all(c.val_at_least(1) for c in cp[:n]):
        return False
    c0 = cp[0]
    if c0.unit is None:
        if c0.prec is not None and c0.prec < 2:
            raise InsufficientPrecision("constant term undecidable")
        return False
    return c0.val == 1


# -- decompositions --------------------------------------------------------------


def central_residue(g: LocalMatrix) -> int:
    """Common residue of the diagonal (raises if the diagonal entries differ)."""
    codes = {g[i, i].residue() for i in range(g.n_size)}
    if len(codes) != 1 or 0 in codes:
        raise PadicError("diagonal residues are not a common unit")
    return codes.pop()


def strip_center(g: LocalMatrix) -> tuple[int, LocalMatrix]:
    """g = ĉ·x with ĉ Teichmüller scalar and x ≡ 1 on the diagonal."""
    c = central_residue(g)
    inv = g.ring.teichmuller(c).inverse()
    return c, g.scale(inv)


def decompose_twisted(g: LocalMatrix) -> tuple[int, LocalMatrix]:
    """g = φ_u·x with x ∈ Z(q)I⁺: returns (code of u, x).

    Rows 1..N-1 of φ_u·x are rows 2..N of x, so x's central residue c is read
    off g[0,1]; the corner g[N,1] = ϖ·û·x_11 then gives u.
    """
    n = g.n_size
    if n < 2:
        raise PadicError("twisted decomposition needs N ≥ 2")
    E = g.ring.tower.ext
    c = g[0, 1].residue()
    corner = g[n - 1, 0].shift(-1)
    if c == 0 or not corner.is_unit():
        raise PadicError("element is not in φ·Z(q)I⁺")
    u = E.mul(corner.residue(), E.inv(c))
    x = phi(g.ring, u, n).inverse() @ g
    central_residue(x)
    return u, x


def member_of_K(x: LocalMatrix, a_inv: int) -> tuple[int, int, int, LocalMatrix] | None:
    """Decompose x ∈ Z I⁺ ⟨φ_{a^{-1}}⟩ as ϖ^m · φ^j · ĉ · x⁺.

    Returns (m, j, c, x⁺) or None when x is not in the group.
    """
    ring = x.ring
    n = x.n_size
    try:
        v = x.det().valuation()
    except InsufficientPrecision:
        raise
    j = v % n
    m = (v - j) // n
    y = x.map(lambda e: e.shift(-m))
    ph = phi(ring, a_inv, n)
    if j:
        phinv = ph.inverse()
        for _ in range(j):
            y = phinv @ y
    try:
        c, xplus = strip_center(y)
    except PadicError:
        return None
    if classify_iwahori(xplus, "GL") not in ("I+", "I++"):
        return None
    return m, j, c, xplus


# -- key lemma probe ---------------------------------------------------------------


def _perm_matrix(ring: LocalRing, perm: Sequence[int]) -> LocalMatrix:
    n = len(perm)
    zero, one = ring.zero(), ring.one()
    return LocalMatrix(ring, [[one if perm[i] == j else zero for j in range(n)] for i in range(n)])


def monomial_in_I_omega(perm: Sequence[int], exps: Sequence[int]) -> bool:
    """Whether y = P·diag(ϖ^{k_i})·(unit diagonal) lies in I⟨φ_1⟩.

    Row i of y has its entry in column perm[i] with valuation exps[perm[i]].
    φ_1^{-j}·y is again monomial; it is in ϖ^m·I exactly when it is diagonal
    with all valuations equal.
    """
    n = len(perm)
    # φ_1 maps row r+1 to row r and row 1 (times ϖ) to row N; so φ^{-1} shifts rows down
    for j in range(n):
        cols = [perm[(i - j) % n] for i in range(n)]
        if cols != list(range(n)):
            continue
        vals = []
        for i in range(n):
            src = (i - j) % n
            wraps = 1 if i < j else 0  # rows that crossed the ϖ corner
            vals.append(exps[perm[src]] - wraps)
        if len(set(vals)) == 1:
            return True
    return False


@dataclass
class KeyLemmaResult:
    tested: int
    conjugate_in_I: int
    counterexamples: list[dict]

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def key_lemma_probe(g: LocalMatrix, bound: int = 1) -> KeyLemmaResult:
    """Search y = P·diag(ϖ^k)·(Teichmüller diagonal, first entry 1), |k_i| ≤ bound,
    for ygy^{-1} ∈ I with y ∉ I⟨φ_1⟩."""
    ring = g.ring
    n = g.n_size
    if classify_iwahori(g, "GL") not in ("I+", "I++") or not is_affine_generic(affine_components(g)):
        raise PadicError("key lemma probe needs an affine generic element of I+")
    E = ring.tower.ext
    units = list(E._exp)
    tested = 0
    inside = 0
    bad: list[dict] = []
    for perm in itertools.permutations(range(n)):
        P = _perm_matrix(ring, perm)
        Pinv = _perm_matrix(ring, [perm.index(i) for i in range(n)])
        for exps in itertools.product(range(-bound, bound + 1), repeat=n):
            # translate so the pinned valuation is 0: scalars lie in ⟨φ⟩
            D = LocalMatrix.diag(ring, [ring.pi_power(e) for e in exps])
            Dinv = LocalMatrix.diag(ring, [ring.pi_power(-e) for e in exps])
            PD, DPinv = P @ D, Dinv @ Pinv
            expected = monomial_in_I_omega(perm, exps)
            for ts in itertools.product(units, repeat=n - 1):
                T = teich_diag(ring, (1,) + ts)
                Tinv = teich_diag(ring, (1,) + tuple(E.inv(t) for t in ts))
                conj = PD @ T @ g @ Tinv @ DPinv
                tested += 1
                if _in_I(conj):
                    inside += 1
                    if not expected:
                        bad.append({"perm": list(perm), "exps": list(exps), "t": [E.name(t) for t in (1,) + ts]})
    return KeyLemmaResult(tested, inside, bad)


def key_lemma_report(q: int, N: int, bound: int = 1, precision: int = 4, u: int = 1) -> "VerifyReport":
    """key_lemma_probe at g = 1+φ_u as a report."""
    from .gf import make_tower
    from .report import VerifyReport, verdict

    tower = make_tower(q)
    ring = local_ring(tower.p, tower.f, precision)
    res = key_lemma_probe(one_plus_phi(ring, tower.embed_code(u), N), bound)
    inputs = {"q": q, "N": N, "bound": bound, "precision": precision, "u": u}
    values = {"tested": res.tested, "conjugate_in_I": res.conjugate_in_I}
    return VerifyReport("key-lemma", inputs, verdict(res.passed), values, rows=res.counterexamples)
