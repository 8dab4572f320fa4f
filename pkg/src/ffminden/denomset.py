"""Restricted denominator sets S of monic polynomials.

Sets are described by a tiny DSL::

    all-monic | powers:<poly> | irreducible
    | degrees:<even|odd|d1,d2,...|a..b> | list:<poly>;<poly>;...

and queried one degree slice at a time.  The only monic polynomial of degree
0 is ``1``; whether it belongs to S matters (it decides whether ``0/1`` is an
admissible fraction).
"""

from __future__ import annotations

import re
from functools import lru_cache

from .errors import CapExceeded, ConstantBase, EmptySet, NonMonicBase, ParseError
from .ff import Field
from .polyring import Poly, _mul, _pad, format_poly, is_irreducible, parse_poly

DEFAULT_CAP = 64


class DenomSet:
    """A set of monic polynomials, queryable by degree slice."""

    kind = "abstract"

    def __init__(self, field: Field):
        self.field = field

    #: False when the set is finite (theorems assume infinite S)
    infinite = True

    def spec(self) -> str:
        raise NotImplementedError

    def _raw_members(self, d: int) -> tuple[tuple[int, ...], ...]:
        raise NotImplementedError

    def raw_members(self, d: int) -> tuple[tuple[int, ...], ...]:
        """Coefficient tuples of the degree-``d`` slice, canonical order (cached)."""
        return _slice_cache(self, d)

    def members(self, d: int) -> list[Poly]:
        return [Poly._raw(self.field, c) for c in self.raw_members(d)]

    def has_degree(self, d: int) -> bool:
        return bool(self.raw_members(d))

    def contains(self, f: Poly) -> bool:
        if f.is_zero or not f.is_monic or f.field != self.field:
            return False
        return f.coeffs in set(self.raw_members(f.deg))

    __contains__ = contains

    @property
    def contains_one(self) -> bool:
        return self.has_degree(0)

    def m_S(self, n: int, cap: int = DEFAULT_CAP) -> int:
        """Least ``k >= n`` with a nonempty degree-``k`` slice."""
        for k in range(n, cap + 1):
            if self._degree_nonempty(k):
                return k
        raise CapExceeded(f"{self.spec()} has no member of degree in [{n}, {cap}]")

    def _degree_nonempty(self, k: int) -> bool:
        return self.has_degree(k)

    def __eq__(self, other):
        return isinstance(other, DenomSet) and self.field == other.field and self.spec() == other.spec()

    def __hash__(self):
        return hash((self.field, self.spec()))

    def __reduce__(self):
        return (set_parse, (self.field, self.spec()))

    def __repr__(self):
        return f"DenomSet({self.spec()!r}, q={self.field.q})"


@lru_cache(maxsize=4096)
def _slice_cache(s: DenomSet, d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(s._raw_members(d))


def _all_monic(field: Field, d: int) -> list[tuple[int, ...]]:
    q = field.q
    return [_pad(q, lower, d) + (1,) for lower in range(q**d)]


class AllMonic(DenomSet):
    kind = "all-monic"

    def spec(self):
        return "all-monic"

    def _raw_members(self, d):
        return _all_monic(self.field, d)

    def _degree_nonempty(self, k):
        return True


class Powers(DenomSet):
    kind = "powers"

    def __init__(self, field: Field, base: Poly):
        super().__init__(field)
        if base.is_zero or base.deg < 1:
            raise ConstantBase(f"powers base {base} must be non-constant")
        if not base.is_monic:
            raise NonMonicBase(f"powers base {base} must be monic")
        self.base = base

    def spec(self):
        return f"powers:{format_poly(self.base)}"

    def _raw_members(self, d):
        b = self.base.deg
        if d % b:
            return []
        return [(self.base ** (d // b)).coeffs]

    def _degree_nonempty(self, k):
        return k % self.base.deg == 0


class Irreducibles(DenomSet):
    """Monic irreducible polynomials; ``1`` is not a member."""

    kind = "irreducible"

    def spec(self):
        return "irreducible"

    def _raw_members(self, d):
        if d == 0:
            return []
        field = self.field
        reducible = set()
        for i in range(1, d // 2 + 1):
            for f in self.raw_members(i):
                for g in _all_monic(field, d - i):
                    reducible.add(_mul(field, f, g))
        return [c for c in _all_monic(field, d) if c not in reducible]

    def _degree_nonempty(self, k):
        return k >= 1


class DegreeFiltered(DenomSet):
    """All monic polynomials whose degree passes a filter."""

    kind = "degrees"

    def __init__(self, field: Field, rule: str):
        super().__init__(field)
        rule = rule.strip()
        self.rule = rule
        if rule in ("even", "odd"):
            self._degrees = None
        else:
            mt = re.fullmatch(r"(\d+)\.\.(\d+)", rule)
            if mt:
                lo, hi = int(mt.group(1)), int(mt.group(2))
                degs = set(range(lo, hi + 1))
            elif re.fullmatch(r"\d+(,\d+)*", rule):
                degs = {int(t) for t in rule.split(",")}
            else:
                raise ParseError(f"bad degree filter {rule!r}")
            if not degs:
                raise EmptySet(f"degree filter {rule!r} admits no degree")
            self._degrees = frozenset(degs)
            self.infinite = False

    def admits(self, d: int) -> bool:
        if self.rule == "even":
            return d % 2 == 0
        if self.rule == "odd":
            return d % 2 == 1
        return d in self._degrees

    def spec(self):
        return f"degrees:{self.rule}"

    def _raw_members(self, d):
        return _all_monic(self.field, d) if self.admits(d) else []

    def _degree_nonempty(self, k):
        return self.admits(k)


class ExplicitList(DenomSet):
    kind = "list"
    infinite = False

    def __init__(self, field: Field, polys: list[Poly]):
        super().__init__(field)
        if not polys:
            raise EmptySet("explicit list is empty")
        for f in polys:
            if not f.is_monic:
                raise NonMonicBase(f"list member {f} is not monic")
        self.polys = sorted(set(polys), key=Poly.sort_key)

    def spec(self):
        return "list:" + ";".join(format_poly(f) for f in self.polys)

    def _raw_members(self, d):
        return [f.coeffs for f in self.polys if f.deg == d]


def set_parse(field: Field, text: str) -> DenomSet:
    text = text.strip().replace(" ", "")
    if text == "all-monic":
        return AllMonic(field)
    if text in ("irreducible", "irreducibles"):
        return Irreducibles(field)
    head, sep, body = text.partition(":")
    if not sep or not body:
        raise ParseError(
            f"bad set spec {text!r}; expected all-monic | powers:<poly> | irreducible"
            " | degrees:<even|odd|d1,d2,...|a..b> | list:<poly>;<poly>;..."
        )
    if head == "powers":
        return Powers(field, parse_poly(field, body))
    if head == "degrees":
        return DegreeFiltered(field, body)
    if head == "list":
        return ExplicitList(field, [parse_poly(field, part) for part in body.split(";") if part])
    raise ParseError(f"unknown set kind {head!r}")


def set_members(s: DenomSet, d: int) -> list[Poly]:
    return s.members(d)


def m_S(s: DenomSet, n: int, cap: int = DEFAULT_CAP) -> int:
    return s.m_S(n, cap)


def contains(s: DenomSet, f: Poly) -> bool:
    """Membership by predicate, independent of the slice enumeration."""
    if f.is_zero or not f.is_monic:
        return False
    if isinstance(s, AllMonic):
        return True
    if isinstance(s, Irreducibles):
        return f.deg >= 1 and is_irreducible(f)
    if isinstance(s, DegreeFiltered):
        return s.admits(f.deg)
    if isinstance(s, Powers):
        g = f
        while g.deg > 0:
            quo, rem = divmod(g, s.base)
            if rem:
                return False
            g = quo
        return g.coeffs == (1,)
    return f in s.polys
