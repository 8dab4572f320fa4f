"""The polynomial ring R = F_q[x].

A :class:`Poly` stores little-endian coefficient codes (see :mod:`ffminden.ff`)
with no trailing zeros; the zero polynomial has no coefficients and degree
:data:`NEG_INF`.  Norms ``|f| = q**deg f`` are never materialized, callers
compare degrees instead.

The canonical order on polynomials is degree first, then coefficients from
the leading one downward.  It coincides with the order of
``index(f) = sum c_i * q**i``, which is also the enumeration order.
"""

from __future__ import annotations

import itertools
import re
from functools import total_ordering
from typing import Iterable, Iterator, Sequence

from .errors import (
    AllZero,
    DegreeTooSmall,
    DivisionByZero,
    FieldMismatch,
    ParseError,
    ValidationError,
    ZeroInput,
)
from .ff import Field, FieldElement, parse_element_code


@total_ordering
class _NegInf:
    """Degree of the zero polynomial; below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("NEG_INF")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("NEG_INF - NEG_INF")
        return self

    def __neg__(self):
        raise ArithmeticError("-NEG_INF is not representable")

    def __repr__(self):
        return "NEG_INF"

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()


# raw coefficient-tuple helpers; all take the field's tables --------------


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _add(f: Field, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    add = f.add_table
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = add[out[i]][c]
    return _trim(out)


def _sub(f: Field, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    sub = f.sub_table
    n = max(len(a), len(b))
    out = [sub[a[i] if i < len(a) else 0][b[i] if i < len(b) else 0] for i in range(n)]
    return _trim(out)


def _mul(f: Field, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    add, mul = f.add_table, f.mul_table
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            row = mul[x]
            for j, y in enumerate(b):
                out[i + j] = add[out[i + j]][row[y]]
    return _trim(out)


def _scale(f: Field, a: Sequence[int], c: int) -> tuple[int, ...]:
    row = f.mul_table[c]
    return _trim([row[x] for x in a])


def _divmod(f: Field, a: Sequence[int], b: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), tuple(a)
    sub, mul = f.sub_table, f.mul_table
    inv_lead = f.inv_table[b[-1]]
    r = list(a)
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if c:
            t = mul[c][inv_lead]
            quo[i - db] = t
            row = mul[t]
            for j in range(db + 1):
                r[i - db + j] = sub[r[i - db + j]][row[b[j]]]
    return _trim(quo), _trim(r[:db])


def _mod(f: Field, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return _divmod(f, a, b)[1]


def _monic(f: Field, a: Sequence[int]) -> tuple[int, ...]:
    if not a or a[-1] == 1:
        return tuple(a)
    return _scale(f, a, f.inv_table[a[-1]])


def _gcd(f: Field, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    while b:
        a, b = b, _mod(f, a, b)
    return _monic(f, a)


def _index(q: int, coeffs: Sequence[int]) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * q + c
    return v


# public type -------------------------------------------------------------


class Poly:
    """Immutable polynomial over a finite field."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: Field, coeffs: Iterable[int | FieldElement] = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise FieldMismatch("coefficient from a different field")
                cs.append(c.code)
            else:
                c = int(c)
                if field.e == 1:
                    c %= field.p
                elif not 0 <= c < field.q:
                    raise ValidationError(f"coefficient code {c} out of range")
                cs.append(c)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", _trim(cs))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, field: Field, coeffs: tuple[int, ...]) -> Poly:
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly._raw, (self.field, self.coeffs))

    # constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> Poly:
        return cls._raw(field, ())

    @classmethod
    def one(cls, field: Field) -> Poly:
        return cls._raw(field, (1,))

    @classmethod
    def x(cls, field: Field, power: int = 1) -> Poly:
        return cls._raw(field, (0,) * power + (1,))

    @classmethod
    def from_index(cls, field: Field, idx: int) -> Poly:
        """Inverse of :attr:`index`."""
        out = []
        while idx:
            idx, r = divmod(idx, field.q)
            out.append(r)
        return cls._raw(field, tuple(out))

    # basic properties -------------------------------------------------

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def lead(self) -> int:
        if not self.coeffs:
            raise ZeroInput("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def index(self) -> int:
        return _index(self.field.q, self.coeffs)

    def coeff(self, i: int) -> FieldElement:
        return FieldElement(self.field, self.coeffs[i] if 0 <= i < len(self.coeffs) else 0)

    def sort_key(self):
        return (len(self.coeffs), tuple(reversed(self.coeffs)))

    def monic(self) -> Poly:
        if not self.coeffs:
            raise ZeroInput("cannot normalize the zero polynomial")
        return Poly._raw(self.field, _monic(self.field, self.coeffs))

    # arithmetic -------------------------------------------------------

    def _check(self, other) -> Poly:
        if isinstance(other, (int, FieldElement)):
            return Poly(self.field, [other])
        if not isinstance(other, Poly):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Poly._raw(self.field, _add(self.field, self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Poly._raw(self.field, _sub(self.field, self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        neg = self.field.neg_table
        return Poly._raw(self.field, tuple(neg[c] for c in self.coeffs))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Poly._raw(self.field, _mul(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValidationError("negative polynomial power")
        acc = (1,)
        base = self.coeffs
        while k:
            if k & 1:
                acc = _mul(self.field, acc, base)
            base = _mul(self.field, base, base)
            k >>= 1
        return Poly._raw(self.field, acc)

    def __divmod__(self, other):
        other = self._check(other)
        s, r = _divmod(self.field, self.coeffs, other.coeffs)
        return Poly._raw(self.field, s), Poly._raw(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: Poly) -> bool:
        return not (other % self).coeffs

    # comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == Poly(self.field, [other]).coeffs
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.field, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __lt__(self, other: Poly):
        return self.sort_key() < other.sort_key()

    def __le__(self, other: Poly):
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other: Poly):
        return self.sort_key() > other.sort_key()

    def __ge__(self, other: Poly):
        return self.sort_key() >= other.sort_key()

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, q={self.field.q})"


PolyVec = tuple  # tuple[Poly, ...]


def vec_deg(v: Sequence[Poly]):
    """Degree exponent of the sup-norm of a vector (NEG_INF for the zero vector)."""
    return max((p.deg for p in v), default=NEG_INF)


# ring operations ---------------------------------------------------------


def poly_gcd(vs: Sequence[Poly]) -> Poly:
    """Monic gcd of a nonempty list of polynomials, not all zero."""
    if not vs:
        raise AllZero("gcd of an empty list")
    f = vs[0].field
    g: tuple[int, ...] = ()
    for v in vs:
        if v.field != f:
            raise FieldMismatch("gcd over mixed fields")
        g = _gcd(f, g, v.coeffs) if g else _monic(f, v.coeffs)
        if g == (1,):
            break
    if not g:
        raise AllZero("gcd of all-zero inputs")
    return Poly._raw(f, g)


def is_primitive(p: Sequence[Poly], q: Poly) -> bool:
    """True iff gcd(p_1, ..., p_m, q) = 1."""
    return poly_gcd([*p, q]).coeffs == (1,)


def enumerate_polys(field: Field, n: int, kind: str = "deg<") -> Iterator[Poly]:
    """Polynomials in canonical order.

    ``kind`` is one of ``"deg<"``, ``"deg="``, ``"monic="`` or ``"monic<"``.
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    q = field.q
    if kind == "deg<":
        for idx in range(q**n):
            yield Poly.from_index(field, idx)
    elif kind == "deg=":
        for idx in range(q**n, q ** (n + 1)):
            yield Poly.from_index(field, idx)
    elif kind == "monic=":
        for lower in range(q**n):
            yield Poly._raw(field, _pad(q, lower, n) + (1,))
    elif kind == "monic<":
        for d in range(n):
            yield from enumerate_polys(field, d, "monic=")
    else:
        raise ValidationError(f"unknown enumeration kind {kind!r}")


def _pad(q: int, idx: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        idx, r = divmod(idx, q)
        out.append(r)
    return tuple(out)


def monic_of_degree(field: Field, d: int) -> list[tuple[int, ...]]:
    """Raw coefficient tuples of all monic polynomials of degree ``d``."""
    q = field.q
    return [_pad(q, lower, d) + (1,) for lower in range(q**d)]


def is_irreducible(f: Poly) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg f // 2."""
    if f.is_zero or f.deg < 1:
        raise DegreeTooSmall("irreducibility needs degree >= 1")
    field = f.field
    for d in range(1, f.deg // 2 + 1):
        for cand in monic_of_degree(field, d):
            if not _mod(field, f.coeffs, cand):
                return False
    return True


def factor(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with exponents, in canonical order of the factors."""
    if f.is_zero:
        raise ZeroInput("cannot factor zero")
    field = f.field
    rest = _monic(field, f.coeffs)
    out: list[tuple[Poly, int]] = []
    d = 1
    while len(rest) - 1 >= 2 * d:
        for cand in monic_of_degree(field, d):
            e = 0
            while True:
                quo, rem = _divmod(field, rest, cand)
                if rem:
                    break
                rest, e = quo, e + 1
            if e:
                out.append((Poly._raw(field, cand), e))
        d += 1
    if len(rest) > 1:
        out.append((Poly._raw(field, rest), 1))
        out.sort(key=lambda fe: fe[0].sort_key())
    return out


def monic_divisors(f: Poly) -> tuple[list[Poly], int]:
    """All monic divisors in canonical order and their count D(f)."""
    fac = factor(f)
    field = f.field
    divs = []
    for exps in itertools.product(*[range(e + 1) for _, e in fac]):
        c: tuple[int, ...] = (1,)
        for (g, _), k in zip(fac, exps):
            for _ in range(k):
                c = _mul(field, c, g.coeffs)
        divs.append(Poly._raw(field, c))
    divs.sort(key=Poly.sort_key)
    return divs, len(divs)


def divisor_count(f: Poly) -> int:
    count = 1
    for _, e in factor(f):
        count *= e + 1
    return count


def mobius(f: Poly) -> int:
    fac = factor(f)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


# text forms ----------------------------------------------------------------


def format_poly(f: Poly, var: str = "x") -> str:
    """Canonical text: descending powers, unit coefficients omitted."""
    if f.is_zero:
        return "0"
    field = f.field
    terms = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if not c:
            continue
        ctext = field.format_code(c)
        if field.e > 1 and not ctext.isdigit():
            ctext = f"({ctext})"
        if i == 0:
            terms.append(ctext)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        terms.append(mono if c == 1 else f"{ctext}*{mono}")
    return "+".join(terms)


_TERM = re.compile(r"^(?:(?P<c>\d+|\([^()]*\))(?:\*(?P<m1>x(?:\^\d+)?))?|(?P<m2>x(?:\^\d+)?))$")


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parenthesis in {text!r}")
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced parenthesis in {text!r}")
    parts.append("".join(cur))
    return parts


def parse_poly(field: Field, text: str) -> Poly:
    """Parse ``"x^2+x+1"``, ``"(t+1)*x^2+(t)*x+1"`` or ``"[a0,a1,...]"``."""
    text = text.strip().replace(" ", "")
    if not text:
        raise ParseError("empty polynomial")
    if text.startswith("["):
        if not text.endswith("]"):
            raise ParseError(f"unterminated coefficient list {text!r}")
        body = text[1:-1]
        items = _split_list(body) if body else []
        return Poly._raw(field, _trim([parse_element_code(field, it) for it in items]))
    coeffs: dict[int, int] = {}
    for term in _split_top(text):
        mt = _TERM.match(term)
        if not mt:
            raise ParseError(f"bad polynomial term {term!r} in {text!r}")
        mono = mt.group("m1") or mt.group("m2")
        ctext = mt.group("c")
        c = parse_element_code(field, ctext) if ctext is not None else 1
        if mono is None:
            power = 0
        elif mono == "x":
            power = 1
        else:
            power = int(mono[2:])
        coeffs[power] = field.add(coeffs.get(power, 0), c)
    top = max(coeffs)
    return Poly._raw(field, _trim([coeffs.get(i, 0) for i in range(top + 1)]))


def _split_list(body: str) -> list[str]:
    items, depth, cur = [], 0, []
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    items.append("".join(cur))
    return items
