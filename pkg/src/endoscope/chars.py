"""Additive and multiplicative characters of the residue fields and of U(1).

Every character takes values in the N-th roots of unity for a known N.  The
method ``exponent`` returns k with value ζ_N^k; ``eval`` turns that into a
CycNum in any ring Z[ζ_M] with N | M.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .cyclo import CycNum, CycRing, cyc_ring
from .gf import FieldError, FqElem, FqField, QuadExt


class CharError(ValueError):
    pass


def _ring_for(order: int, ring: CycRing | None) -> CycRing:
    if ring is None:
        return cyc_ring(order)
    if ring.M % order:
        raise CharError(f"character of order dividing {order} has no values in Z[ζ_{ring.M}]")
    return ring


@dataclass(frozen=True)
class AddChar:
    """x ↦ ζ_p^{Tr_{k/GF(p)}(b·x)}."""

    field: FqField
    b: int  # code of the twist element

    @property
    def order(self) -> int:
        return self.field.p

    @property
    def is_trivial(self) -> bool:
        return self.b == 0

    def exponent_code(self, x: int) -> int:
        F = self.field
        return F.abs_trace_table[F.mul(self.b, x)]

    def exponent(self, x: FqElem) -> int:
        if x.field is not self.field:
            raise CharError("argument outside the character's field")
        return self.exponent_code(x.code)

    def eval(self, x: FqElem, ring: CycRing | None = None) -> CycNum:
        ring = _ring_for(self.order, ring)
        return ring.root_of_unity(self.exponent(x) * (ring.M // self.order))

    @cached_property
    def table(self) -> list[int]:
        """Exponent of every field element, indexed by code."""
        return [self.exponent_code(x) for x in range(self.field.q)]

    def compose_trace(self, tower: QuadExt) -> AddChar:
        """ψ∘Tr_{k_E/k_F} as an additive character of k_E."""
        if tower.base is not self.field:
            raise CharError("ψ is not a character of the tower's base field")
        return AddChar(tower.ext, tower.embed_code(self.b))

    def conjugate(self) -> AddChar:
        return AddChar(self.field, self.field.neg(self.b))

    @property
    def label(self) -> str:
        return f"add:b={self.field.name(self.b)}"


def add_char(field: FqField, b: int | FqElem = 1) -> AddChar:
    code = b.code if isinstance(b, FqElem) else b % field.q if field.f > 1 else b % field.p
    return AddChar(field, code)


@dataclass(frozen=True)
class MultChar:
    """g^i ↦ ζ_N^{ij} on the unit group of ``field`` (N = q - 1)."""

    field: FqField
    j: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "j", self.j % (self.field.q - 1))

    @property
    def order(self) -> int:
        """Root-of-unity order N in which values are expressed."""
        return self.field.q - 1

    @property
    def is_trivial(self) -> bool:
        return self.j == 0

    def exponent_code(self, x: int) -> int:
        if x == 0:
            raise CharError("multiplicative character evaluated at 0")
        return (self.field.log(x) * self.j) % self.order

    def exponent(self, x: FqElem) -> int:
        if x.field is not self.field:
            raise CharError("argument outside the character's group")
        return self.exponent_code(x.code)

    def eval(self, x: FqElem, ring: CycRing | None = None) -> CycNum:
        ring = _ring_for(self.order, ring)
        return ring.root_of_unity(self.exponent(x) * (ring.M // self.order))

    def __mul__(self, other: MultChar) -> MultChar:
        if other.field is not self.field:
            raise CharError("characters on different groups")
        return MultChar(self.field, self.j + other.j)

    def conjugate(self) -> MultChar:
        return MultChar(self.field, -self.j)

    def compose_norm(self, tower: QuadExt) -> MultChar:
        """χ∘Nr_{k_E/k_F} as a character of k_E^×."""
        if tower.base is not self.field:
            raise CharError("χ is not a character of the tower's base field")
        e = (tower.ext.q - 1) // (tower.q - 1)
        # Nr(g_E) = g_F^L; then χ(Nr(g_E^i)) = ζ_{q-1}^{jLi} = ζ_{|k_E^×|}^{jLei}
        L = tower.base.log(tower.norm_code(tower.ext.gen))
        return MultChar(tower.ext, self.j * L * e)

    def group_label(self, tower: QuadExt | None = None) -> str:
        if tower is not None and self.field is tower.base:
            return "F"
        if tower is not None and self.field is tower.ext:
            return "E"
        return f"GF({self.field.q})"

    @property
    def label(self) -> str:
        return f"mul:GF({self.field.q}):j={self.j}"


@dataclass(frozen=True)
class U1Char:
    """u^i ↦ ζ_{q+1}^{ij} on U(1), u = g_E^{q-1}."""

    tower: QuadExt
    j: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "j", self.j % (self.tower.q + 1))

    @property
    def order(self) -> int:
        return self.tower.q + 1

    @property
    def is_trivial(self) -> bool:
        return self.j == 0

    def u1_index(self, x: int) -> int:
        if x == 0:
            raise CharError("U(1) character evaluated at 0")
        lg = self.tower.ext.log(x)
        if lg % (self.tower.q - 1):
            raise CharError("argument is not in U(1)")
        return lg // (self.tower.q - 1)

    def exponent_code(self, x: int) -> int:
        return (self.u1_index(x) * self.j) % self.order

    def exponent(self, x: FqElem) -> int:
        if x.field is not self.tower.ext:
            raise CharError("argument outside k_E")
        return self.exponent_code(x.code)

    def eval(self, x: FqElem, ring: CycRing | None = None) -> CycNum:
        ring = _ring_for(self.order, ring)
        return ring.root_of_unity(self.exponent(x) * (ring.M // self.order))

    def sign_at_minus_one(self) -> int:
        """ω′(-1) as ±1; -1 = u^{(q+1)/2}."""
        return -1 if (self.j * ((self.tower.q + 1) // 2)) % self.order else 1

    @property
    def label(self) -> str:
        return f"mul:U1:j={self.j}"


Character = AddChar | MultChar | U1Char


def is_conjugate_self_dual(tower: QuadExt, omega: MultChar) -> bool:
    """Both criteria: ω trivial on k_F^×, and ω(z) = ω(c(z)^{-1}) for all z.

    Raises if the two disagree, which would indicate a broken tower.
    """
    tower._need_quadratic()
    if omega.field is not tower.ext:
        raise CharError("ω must be a character of k_E^×")
    F, E = tower.base, tower.ext
    trivial_on_base = all(omega.exponent_code(tower.embed_code(a)) == 0 for a in range(1, F.q))
    dual = all(
        omega.exponent_code(z) == omega.exponent_code(E.inv(tower.frob_code(z))) for z in range(1, E.q)
    )
    if trivial_on_base != dual:  # pragma: no cover
        raise CharError("self-duality criteria disagree")
    return trivial_on_base


def omega_from_u1(tower: QuadExt, omega_p: U1Char) -> MultChar:
    """ω(z) = ω′(z / c(z))."""
    tower._need_quadratic()
    q = tower.q
    return MultChar(tower.ext, -omega_p.j * (q - 1))


def u1_from_omega(tower: QuadExt, omega: MultChar) -> U1Char:
    tower._need_quadratic()
    q = tower.q
    if omega.field is not tower.ext or omega.j % (q - 1):
        raise CharError("ω is not conjugate self-dual")
    return U1Char(tower, -(omega.j // (q - 1)))


def enumerate_characters(group: FqField | QuadExt) -> list[MultChar] | list[U1Char]:
    """All characters of k^× (for a field) or of U(1) (for a tower), by index."""
    if isinstance(group, QuadExt):
        return [U1Char(group, j) for j in range(group.q + 1)]
    return [MultChar(group, j) for j in range(group.q - 1)]


def parse_char(tower: QuadExt, text: str) -> Character:
    """Parse ``add:b=<elt>``, ``add:E:b=<elt>``, ``mul:<F|E|U1>:j=<int>``."""
    parts = text.strip().split(":")
    try:
        if parts[0] == "add":
            fld = tower.base
            if len(parts) == 3:
                fld = {"F": tower.base, "E": tower.ext}[parts[1]]
            key, _, val = parts[-1].partition("=")
            if key != "b":
                raise KeyError(key)
            return AddChar(fld, fld.parse(val).code)
        if parts[0] == "mul" and len(parts) == 3:
            key, _, val = parts[2].partition("=")
            if key != "j":
                raise KeyError(key)
            group = parts[1]
            if group == "U1":
                return U1Char(tower, int(val))
            return MultChar({"F": tower.base, "E": tower.ext}[group], int(val))
    except (KeyError, ValueError, FieldError) as exc:
        raise CharError(f"bad character literal {text!r}: {exc}") from None
    raise CharError(f"bad character literal {text!r}")
