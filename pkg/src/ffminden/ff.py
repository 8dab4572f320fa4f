"""Finite fields F_q for prime and small prime-power q.

Elements are identified with integers in ``[0, q)``: the coefficient vector
``(c_0, ..., c_{e-1})`` of an element of ``F_p[t]/(modulus)`` is read as the
base-``p`` digits of its code.  So ``0`` and ``1`` always encode zero and one,
and the integer order of codes is the canonical element order.

All arithmetic goes through precomputed ``q x q`` tables, which keeps the
polynomial code above this module free of any field-specific branches.
"""

from __future__ import annotations

import re
from functools import cached_property
from typing import Iterator, Sequence

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NoDefaultModulus,
    NonPrimeCharacteristic,
    ParseError,
    ReducibleModulus,
    ValidationError,
)

# little-endian coefficients over F_p, monic
DEFAULT_MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # t^2 + t + 1
    8: (1, 1, 0, 1),  # t^3 + t + 1
    9: (1, 0, 1),  # t^2 + 1
    16: (1, 1, 0, 0, 1),  # t^4 + t + 1
    25: (2, 0, 1),  # t^2 + 2
    27: (1, 2, 0, 1),  # t^3 + 2t + 1
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q = p**e``, or raise if ``q`` is not a prime power."""
    if q < 2:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return p, e


def _fp_polymod(a: list[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` by monic ``b`` over F_p (little-endian lists)."""
    a = list(a)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    r = [c % p for c in a[:db]]
    while r and r[-1] == 0:
        r.pop()
    return r


def _fp_irreducible(mod: Sequence[int], p: int) -> bool:
    e = len(mod) - 1
    for d in range(1, e // 2 + 1):
        for code in range(p**d):
            divisor = [(code // p**i) % p for i in range(d)] + [1]
            if not _fp_polymod(list(mod), divisor, p):
                return False
    return True


class Field:
    """The field F_q with q = p**e, realized as F_p[t]/(modulus) when e > 1."""

    __slots__ = ("p", "e", "q", "modulus", "__dict__")

    def __init__(self, p: int, e: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
        if e < 1:
            raise ValidationError(f"extension degree must be >= 1, got {e}")
        q = p**e
        if e == 1:
            if modulus is not None and len(modulus) != 2:
                raise ValidationError("a prime field takes no modulus")
            mod: tuple[int, ...] | None = None
        else:
            if modulus is None:
                if q not in DEFAULT_MODULI:
                    raise NoDefaultModulus(f"no built-in modulus for q={q}; supply one")
                mod = DEFAULT_MODULI[q]
            else:
                mod = tuple(int(c) % p for c in modulus)
                while mod and mod[-1] == 0:
                    mod = mod[:-1]
                if len(mod) != e + 1 or mod[-1] != 1:
                    raise ValidationError(f"modulus must be monic of degree {e}")
            if not _fp_irreducible(mod, p):
                raise ReducibleModulus(f"modulus {mod} is reducible over F_{p}")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = mod

    # identity ---------------------------------------------------------

    def _key(self):
        return (self.p, self.e, self.modulus)

    def __eq__(self, other):
        return isinstance(other, Field) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.e == 1:
            return f"Field(F_{self.p})"
        return f"Field(F_{self.q}, modulus={self.modulus})"

    def __reduce__(self):
        return (Field, (self.p, self.e, self.modulus))

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    # encoding ---------------------------------------------------------

    def digits(self, code: int) -> tuple[int, ...]:
        return tuple((code // self.p**i) % self.p for i in range(self.e))

    def encode(self, digits: Sequence[int]) -> int:
        if len(digits) > self.e:
            raise ValidationError("too many coefficients for this field")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(digits))

    # tables -----------------------------------------------------------

    @cached_property
    def add_table(self) -> list[list[int]]:
        p, q = self.p, self.q
        if self.e == 1:
            return [[(a + b) % p for b in range(q)] for a in range(q)]
        dig = [self.digits(a) for a in range(q)]
        return [[self.encode([(x + y) % p for x, y in zip(dig[a], dig[b])]) for b in range(q)] for a in range(q)]

    @cached_property
    def mul_table(self) -> list[list[int]]:
        p, q = self.p, self.q
        if self.e == 1:
            return [[(a * b) % p for b in range(q)] for a in range(q)]
        dig = [self.digits(a) for a in range(q)]
        table = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * self.e - 1)
                for i, x in enumerate(dig[a]):
                    if x:
                        for j, y in enumerate(dig[b]):
                            prod[i + j] += x * y
                r = _fp_polymod(prod, self.modulus, p)
                table[a][b] = table[b][a] = self.encode(r)
        return table

    @cached_property
    def neg_table(self) -> list[int]:
        add = self.add_table
        return [next(b for b in range(self.q) if add[a][b] == 0) for a in range(self.q)]

    @cached_property
    def sub_table(self) -> list[list[int]]:
        add, neg = self.add_table, self.neg_table
        return [[add[a][neg[b]] for b in range(self.q)] for a in range(self.q)]

    @cached_property
    def inv_table(self) -> list[int]:
        """``inv_table[a]`` is the inverse of ``a``; entry 0 is a placeholder 0."""
        mul = self.mul_table
        inv = [0] * self.q
        for a in range(1, self.q):
            inv[a] = next(b for b in range(1, self.q) if mul[a][b] == 1)
        return inv

    # raw code arithmetic ---------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.sub_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    # elements ---------------------------------------------------------

    def __call__(self, value: int | str | Sequence[int]) -> FieldElement:
        if isinstance(value, str):
            return FieldElement(self, parse_element_code(self, value))
        if isinstance(value, int):
            if self.e == 1:
                return FieldElement(self, value % self.p)
            if not 0 <= value < self.q:
                raise ValidationError(f"code {value} out of range for F_{self.q}")
            return FieldElement(self, value)
        return FieldElement(self, self.encode(value))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> Iterator[FieldElement]:
        """All q elements in canonical (code) order."""
        for code in range(self.q):
            yield FieldElement(self, code)

    def format_code(self, code: int) -> str:
        """Text form: a decimal integer in prime fields, a polynomial in ``t`` otherwise."""
        if self.e == 1:
            return str(code)
        terms = []
        for i, c in reversed(list(enumerate(self.digits(code)))):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "t" if i == 1 else f"t^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"


def field_make(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> Field:
    return Field(p, e, modulus)


def field_from_q(q: int, modulus: Sequence[int] | None = None) -> Field:
    p, e = prime_power(q)
    return Field(p, e, modulus)


_ELEM_TERM = re.compile(r"^(?:(\d+)\*)?t(?:\^(\d+))?$|^(\d+)$")


def parse_element_code(field: Field, text: str) -> int:
    text = text.strip().replace(" ", "")
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    if not text:
        raise ParseError("empty field element")
    if field.e == 1:
        if not text.isdigit():
            raise ParseError(f"bad prime-field element {text!r}")
        v = int(text)
        if v >= field.p:
            raise ParseError(f"element {v} not in [0, {field.p})")
        return v
    digits = [0] * field.e
    for term in text.split("+"):
        mt = _ELEM_TERM.match(term)
        if not mt:
            raise ParseError(f"bad extension-element term {term!r}")
        if mt.group(3) is not None:
            coeff, power = int(mt.group(3)), 0
        else:
            coeff = int(mt.group(1)) if mt.group(1) else 1
            power = int(mt.group(2)) if mt.group(2) else 1
        if power >= field.e:
            raise ParseError(f"power t^{power} not reduced (extension degree {field.e})")
        if coeff >= field.p:
            raise ParseError(f"coefficient {coeff} not in [0, {field.p})")
        digits[power] = (digits[power] + coeff) % field.p
    return field.encode(digits)


class FieldElement:
    """An immutable element of a :class:`Field`, stored by its code."""

    __slots__ = ("field", "code")

    def __init__(self, field: Field, code: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", code)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def __reduce__(self):
        return (FieldElement, (self.field, self.code))

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.code
        if isinstance(other, int):
            return self.field(other).code
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(b, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def inv(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.code))

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        acc, base = 1, self.code
        mul = self.field.mul_table
        while k:
            if k & 1:
                acc = mul[acc][base]
            base = mul[base][base]
            k >>= 1
        return FieldElement(self.field, acc)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.field(other).code == self.code
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __lt__(self, other: FieldElement):
        return self.code < self._other(other)

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __str__(self):
        return self.field.format_code(self.code)

    def __repr__(self):
        return f"FieldElement({self}, q={self.field.q})"
