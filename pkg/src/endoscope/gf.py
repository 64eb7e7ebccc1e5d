"""Small finite fields GF(p^f) and the residue tower k_F ⊂ k_E.

Elements are stored as integer codes: the polynomial c_0 + c_1 x + ... is the
integer c_0 + c_1 p + c_2 p^2 + ....  Multiplication goes through discrete-log
tables that are built eagerly, so every field handled here must be small
enough to enumerate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

MAX_FIELD_SIZE = 2**20


class FieldError(ValueError):
    """Raised for illegal field parameters or cross-field operations."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p) as coefficient lists, low degree first ----------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_mod(a, b, p)
    return a


def poly_powmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = poly_mod(base, m, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        base = poly_mod(poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(m: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    d = len(m) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    if poly_powmod(x, p**d, m, p) != poly_mod(x, m, p):
        return False
    for ell in prime_factors(d):
        h = poly_sub(poly_powmod(x, p ** (d // ell), m, p), x, p)
        if len(poly_gcd(m, h, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree d.

    Candidates are ordered by the coefficient tuple (c_0, ..., c_{d-1}).
    """
    for low in itertools.product(range(p), repeat=d):
        m = list(low) + [1]
        if is_irreducible(m, p):
            return tuple(m)
    raise FieldError(f"no irreducible polynomial of degree {d} over GF({p})")


# -- fields ------------------------------------------------------------------


class FqField:
    """GF(p^f) with a fixed modulus, generator, and log/antilog tables."""

    def __init__(self, p: int, f: int = 1):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        if f < 1:
            raise FieldError("extension degree must be positive")
        if p**f > MAX_FIELD_SIZE:
            raise FieldError(f"GF({p}^{f}) exceeds the enumeration limit {MAX_FIELD_SIZE}")
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = smallest_irreducible(p, f)
        self.gen = self._find_generator()
        order = self.q - 1
        exp = [0] * order
        log = [-1] * self.q
        cur = 1
        for i in range(order):
            exp[i] = cur
            log[cur] = i
            cur = self._slow_mul(cur, self.gen)
        if cur != 1 or min(log[1:]) < 0:
            raise FieldError("generator does not have full order")
        self._exp = exp
        self._log = log

    # code <-> coefficient conversions
    def digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.f):
            code, r = divmod(code, self.p)
            out.append(r)
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        code = 0
        for c in reversed(list(digits)[: self.f]):
            code = code * self.p + (c % self.p)
        return code

    def _slow_mul(self, a: int, b: int) -> int:
        prod = poly_mul(self.digits(a), self.digits(b), self.p)
        return self.from_digits(poly_mod(prod, self.modulus, self.p))

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        order = self.q - 1
        ells = prime_factors(order)
        for g in range(1, self.q):
            if all(self._slow_pow(g, order // ell) != 1 for ell in ells):
                return g
        raise FieldError("no primitive element found")  # pragma: no cover

    # arithmetic on codes
    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        p = self.p
        out, scale = 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        return self.from_digits([-c for c in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("non-positive power of zero")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("discrete log of zero")
        return self._log[a]

    def exp(self, i: int) -> int:
        return self._exp[i % (self.q - 1)]

    def from_int(self, n: int) -> int:
        return n % self.p

    @cached_property
    def abs_trace_table(self) -> list[int]:
        """Tr_{GF(q)/GF(p)} of every code, as an integer mod p."""
        table = [0] * self.q
        for a in range(self.q):
            s, x = 0, a
            for _ in range(self.f):
                s = self.add(s, x)
                x = self.pow(x, self.p) if x else 0
            table[a] = s  # lands in the prime field, code == integer value
        return table

    def is_square(self, a: int) -> bool:
        return a == 0 or self._log[a] % 2 == 0

    def elem(self, value: int | Sequence[int]) -> FqElem:
        if isinstance(value, int):
            if not 0 <= value < self.q:
                raise FieldError(f"code {value} out of range for GF({self.q})")
            return FqElem(self, value)
        return FqElem(self, self.from_digits(value))

    def zero(self) -> FqElem:
        return FqElem(self, 0)

    def one(self) -> FqElem:
        return FqElem(self, 1)

    def generator(self) -> FqElem:
        return FqElem(self, self.gen)

    def elements(self) -> list[FqElem]:
        return [FqElem(self, c) for c in range(self.q)]

    def units(self) -> list[FqElem]:
        """Nonzero elements in generator-power order g^0, g^1, ...."""
        return [FqElem(self, c) for c in self._exp]

    def name(self, code: int) -> str:
        """Human-readable polynomial form, e.g. ``2+x^2``; plain integer when f = 1."""
        if self.f == 1:
            return str(code)
        terms = []
        for i, c in enumerate(self.digits(code)):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> FqElem:
        """Parse an integer code or a polynomial like ``1+2x+x^2``."""
        text = text.strip().replace(" ", "")
        if "x" not in text:
            return self.elem(int(text) % self.q if self.f > 1 else int(text) % self.p)
        coeffs = [0] * self.f
        for term in text.replace("-", "+-").split("+"):
            if not term:
                continue
            if "x" in term:
                c, _, e = term.partition("x")
                c = 1 if c in ("", "+") else (-1 if c == "-" else int(c.rstrip("*")))
                e = int(e[1:]) if e.startswith("^") else 1
            else:
                c, e = int(term), 0
            if e >= self.f:
                raise FieldError(f"degree {e} term in GF({self.q}) literal")
            coeffs[e] += c
        return self.elem(coeffs)

    def __repr__(self) -> str:
        return f"FqField(p={self.p}, f={self.f})"

    def __reduce__(self):
        return (_field, (self.p, self.f))


@lru_cache(maxsize=None)
def _field(p: int, f: int) -> FqField:
    return FqField(p, f)


def field(p: int, f: int = 1) -> FqField:
    """Cached field constructor; fields are immutable so sharing is safe."""
    return _field(p, f)


@dataclass(frozen=True)
class FqElem:
    field: FqField
    code: int

    def _check(self, other: FqElem | int) -> int:
        if isinstance(other, int):
            return self.field.from_int(other)
        if other.field is not self.field:
            raise FieldError("operands live in different fields")
        return other.code

    def __add__(self, other: FqElem | int) -> FqElem:
        return FqElem(self.field, self.field.add(self.code, self._check(other)))

    __radd__ = __add__

    def __sub__(self, other: FqElem | int) -> FqElem:
        return FqElem(self.field, self.field.sub(self.code, self._check(other)))

    def __rsub__(self, other: FqElem | int) -> FqElem:
        return FqElem(self.field, self.field.sub(self._check(other), self.code))

    def __neg__(self) -> FqElem:
        return FqElem(self.field, self.field.neg(self.code))

    def __mul__(self, other: FqElem | int) -> FqElem:
        return FqElem(self.field, self.field.mul(self.code, self._check(other)))

    __rmul__ = __mul__

    def inverse(self) -> FqElem:
        return FqElem(self.field, self.field.inv(self.code))

    def __truediv__(self, other: FqElem | int) -> FqElem:
        return FqElem(self.field, self.field.mul(self.code, self.field.inv(self._check(other))))

    def __pow__(self, e: int) -> FqElem:
        return FqElem(self.field, self.field.pow(self.code, e))

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        if isinstance(other, FqElem):
            return self.field is other.field and self.code == other.code
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.f, self.code))

    def log(self) -> int:
        return self.field.log(self.code)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field.digits(self.code))

    def __repr__(self) -> str:
        return self.field.name(self.code)


# -- the tower k_F ⊂ k_E -----------------------------------------------------


class QuadExt:
    """Residue tower k_F = GF(q) ⊂ k_E = GF(q^r).

    The name reflects the default r = 2; general r is allowed for the
    Hasse-Davenport checks only.
    """

    def __init__(self, p: int, f: int = 1, r: int = 2):
        if r < 1:
            raise FieldError("relative degree must be positive")
        self.base = field(p, f)
        self.ext = field(p, f * r)
        self.r = r
        self.p = p
        self.f = f
        self.q = self.base.q
        E, F = self.ext, self.base
        # smallest-code root of the k_F modulus inside k_E
        root = None
        for c in range(E.q):
            acc = 0
            for coeff in reversed(F.modulus):
                acc = E.add(E.mul(acc, c), coeff)
            if acc == 0:
                root = c
                break
        if root is None:  # pragma: no cover
            raise FieldError("k_F modulus has no root in k_E")
        powers = [1]
        for _ in range(1, F.f):
            powers.append(E.mul(powers[-1], root))
        self._embed = [0] * F.q
        for a in range(F.q):
            acc = 0
            for c, pw in zip(F.digits(a), powers):
                if c:
                    acc = E.add(acc, E.mul(E.from_int(c), pw))
            self._embed[a] = acc
        self._pull = {e: a for a, e in enumerate(self._embed)}
        if len(self._pull) != F.q:  # pragma: no cover
            raise FieldError("embedding is not injective")
        self._norm_exp = (E.q - 1) // (F.q - 1)

    # residue-level maps on codes
    def embed_code(self, a: int) -> int:
        return self._embed[a]

    def pull_code(self, e: int) -> int:
        try:
            return self._pull[e]
        except KeyError:
            raise FieldError(f"{self.ext.name(e)} is not in k_F") from None

    def in_base_code(self, e: int) -> bool:
        return e in self._pull

    def frob_code(self, x: int) -> int:
        """x ↦ x^q on k_E."""
        return self.ext.pow(x, self.q) if x else 0

    def norm_code(self, x: int) -> int:
        if x == 0:
            return 0
        return self._pull[self.ext.pow(x, self._norm_exp)]

    def trace_code(self, x: int) -> int:
        return self.trace_table[x]

    @cached_property
    def trace_table(self) -> list[int]:
        E = self.ext
        table = [0] * E.q
        for x in range(E.q):
            s, y = 0, x
            for _ in range(self.r):
                s = E.add(s, y)
                y = self.frob_code(y)
            table[x] = self._pull[s]
        return table

    @cached_property
    def norm_log_table(self) -> list[int]:
        """log_{k_F}(Nr(g_E^i)) for i = 0 .. |k_E^×| - 1."""
        E, F = self.ext, self.base
        return [F.log(self.norm_code(E.exp(i))) for i in range(E.q - 1)]

    # element-level API
    def embed(self, a: FqElem) -> FqElem:
        if a.field is not self.base:
            raise FieldError("embed expects an element of k_F")
        return FqElem(self.ext, self._embed[a.code])

    def pullback(self, x: FqElem) -> FqElem:
        return FqElem(self.base, self.pull_code(x.code))

    def norm(self, x: FqElem) -> FqElem:
        self._check_ext(x)
        return FqElem(self.base, self.norm_code(x.code))

    def trace(self, x: FqElem) -> FqElem:
        self._check_ext(x)
        return FqElem(self.base, self.trace_table[x.code])

    def conj(self, x: FqElem) -> FqElem:
        if self.r != 2:
            raise FieldError("Galois conjugation is only defined for r = 2")
        self._check_ext(x)
        return FqElem(self.ext, self.frob_code(x.code))

    def _check_ext(self, x: FqElem) -> None:
        if x.field is not self.ext:
            raise FieldError("expected an element of k_E")

    def lift(self, a: FqElem | int) -> FqElem:
        """Coerce k_F elements (or integers) into k_E; k_E elements pass through."""
        if isinstance(a, int):
            return FqElem(self.ext, self.ext.from_int(a))
        if a.field is self.ext:
            return a
        return self.embed(a)

    @cached_property
    def eps_f(self) -> FqElem:
        """Smallest non-square of k_F^× by code."""
        F = self.base
        for c in range(1, F.q):
            if not F.is_square(c):
                return FqElem(F, c)
        raise FieldError("no non-square")  # pragma: no cover

    @cached_property
    def eps(self) -> FqElem:
        """Smaller-coded square root of eps_f in k_E (needs r even)."""
        if self.r % 2:
            raise FieldError("eps requires even relative degree")
        E = self.ext
        target = self._embed[self.eps_f.code]
        roots = [c for c in range(1, E.q) if E.mul(c, c) == target]
        return FqElem(E, min(roots))

    @cached_property
    def u1_gen(self) -> FqElem:
        """Generator g^{q-1} of U(1), g the fixed generator of k_E^×."""
        self._need_quadratic()
        return FqElem(self.ext, self.ext.exp(self.q - 1))

    def _need_quadratic(self) -> None:
        if self.r != 2:
            raise FieldError("operation requires r = 2")

    def __repr__(self) -> str:
        return f"QuadExt(p={self.p}, f={self.f}, r={self.r})"

    def __reduce__(self):
        return (_tower, (self.p, self.f, self.r))


@lru_cache(maxsize=None)
def _tower(p: int, f: int, r: int) -> QuadExt:
    return QuadExt(p, f, r)


def make_tower(p: int, f: int = 1, r: int = 2) -> QuadExt:
    """Cached tower constructor; equal arguments always give the same object."""
    if not is_prime(p) or p == 2:
        raise FieldError(f"p must be an odd prime, got {p}")
    if f < 1 or r < 1:
        raise FieldError("degrees must be positive")
    if p ** (f * r) > MAX_FIELD_SIZE:
        raise FieldError(f"GF({p}^{f * r}) exceeds the enumeration limit {MAX_FIELD_SIZE}")
    return _tower(p, f, r)


@dataclass(frozen=True)
class Epsilon:
    eps_f: FqElem
    eps: FqElem


def epsilon(tower: QuadExt) -> Epsilon:
    return Epsilon(tower.eps_f, tower.eps)


def norm(tower: QuadExt, x: FqElem) -> FqElem:
    return tower.norm(x)


def trace(tower: QuadExt, x: FqElem) -> FqElem:
    return tower.trace(x)


def conj(tower: QuadExt, x: FqElem) -> FqElem:
    return tower.conj(x)


def unit_circle(tower: QuadExt) -> list[FqElem]:
    """U(1) = ker Nr, listed as u^0, u^1, ..., u^q for u = g^{q-1}."""
    tower._need_quadratic()
    E = tower.ext
    step = tower.q - 1
    return [FqElem(E, E.exp(step * i)) for i in range(tower.q + 1)]


def coset_transversal_u1(tower: QuadExt) -> list[FqElem]:
    """g^0, ..., g^{q-2}: one representative per coset of U(1) in k_E^×."""
    tower._need_quadratic()
    E = tower.ext
    return [FqElem(E, E.exp(i)) for i in range(tower.q - 1)]


def iter_units_codes(F: FqField) -> Iterator[int]:
    return iter(F._exp)
