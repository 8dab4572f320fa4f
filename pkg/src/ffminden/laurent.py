"""Truncated Laurent tails: the finite stand-in for the maximal ideal of K_inf.

An element of the maximal ideal ``sum_{j>=1} a_j x^-j`` is only ever known
through its first ``n`` tail coefficients.  That is enough for everything
downstream: ``|alpha - P/Q| < q^-n`` holds iff the two tails agree on
``a_1 .. a_n``, so each length-``n`` prefix stands for one ball of radius
``q^-(n+1)`` and all such balls carry the same Haar measure ``q^-n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import (
    BudgetExceeded,
    DegreeOverflow,
    FieldMismatch,
    ParseError,
    PrecisionMismatch,
    PrecisionTooLow,
    ValidationError,
    ZeroDenominator,
)
from .ff import Field, parse_element_code
from .polyring import NEG_INF, Poly, _divmod, _split_list

DEFAULT_BUDGET = 10**7


def _expand(field: Field, a: Sequence[int], den: Sequence[int], n: int) -> tuple[int, ...]:
    """First ``n`` Laurent coefficients of ``a/den`` where ``deg a < deg den``."""
    d = len(den) - 1
    sub, mul = field.sub_table, field.mul_table
    inv_lead = field.inv_table[den[-1]]
    # r holds the running remainder, always of degree < d
    r = list(a) + [0] * (d - len(a))
    out = []
    for _ in range(n):
        top = r[d - 1] if d else 0
        r = [0] + r[: d - 1] if d else []
        digit = mul[top][inv_lead]
        out.append(digit)
        if digit:
            row = mul[digit]
            # subtract digit * (den - lead*x^d); the x^d term cancels top
            for j in range(d):
                r[j] = sub[r[j]][row[den[j]]]
    return tuple(out)


@dataclass(frozen=True)
class TruncTail:
    """The class of tails ``a_1 x^-1 + ... + a_n x^-n + O(x^-(n+1))``."""

    field: Field
    coeffs: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def norm_exp(self):
        """Exponent ``-j`` of the first nonzero coefficient, NEG_INF when all vanish."""
        for j, c in enumerate(self.coeffs, start=1):
            if c:
                return -j
        return NEG_INF

    def __add__(self, other: TruncTail) -> TruncTail:
        _same(self, other)
        add = self.field.add_table
        return TruncTail(self.field, tuple(add[a][b] for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: TruncTail) -> TruncTail:
        _same(self, other)
        sub = self.field.sub_table
        return TruncTail(self.field, tuple(sub[a][b] for a, b in zip(self.coeffs, other.coeffs)))

    def truncate(self, n: int) -> TruncTail:
        if n > self.n:
            raise PrecisionTooLow(f"cannot raise precision {self.n} to {n}")
        return TruncTail(self.field, self.coeffs[:n])

    def __str__(self):
        return "[" + ",".join(self.field.format_code(c) for c in self.coeffs) + "]"


def _same(a: TruncTail, b: TruncTail) -> None:
    if a.field != b.field:
        raise FieldMismatch("tails over different fields")
    if a.n != b.n:
        raise PrecisionMismatch(f"precision {a.n} vs {b.n}; truncate explicitly")


@dataclass(frozen=True)
class TruncVec:
    """An m-vector of tails sharing field and precision."""

    tails: tuple[TruncTail, ...]

    def __post_init__(self):
        if not self.tails:
            raise ValidationError("a TruncVec needs at least one coordinate")
        first = self.tails[0]
        for t in self.tails[1:]:
            _same(first, t)

    @classmethod
    def from_raw(cls, field: Field, rows: Sequence[Sequence[int]]) -> TruncVec:
        return cls(tuple(TruncTail(field, tuple(r)) for r in rows))

    @property
    def field(self) -> Field:
        return self.tails[0].field

    @property
    def m(self) -> int:
        return len(self.tails)

    @property
    def n(self) -> int:
        return self.tails[0].n

    @property
    def raw(self) -> tuple[tuple[int, ...], ...]:
        return tuple(t.coeffs for t in self.tails)

    @property
    def norm_exp(self):
        return max((t.norm_exp for t in self.tails), default=NEG_INF)

    def __add__(self, other: TruncVec) -> TruncVec:
        return TruncVec(tuple(a + b for a, b in zip(self.tails, other.tails)))

    def __sub__(self, other: TruncVec) -> TruncVec:
        return TruncVec(tuple(a - b for a, b in zip(self.tails, other.tails)))

    def truncate(self, n: int) -> TruncVec:
        return TruncVec(tuple(t.truncate(n) for t in self.tails))

    def __str__(self):
        if self.m == 1:
            return str(self.tails[0])
        return "(" + ";".join(str(t) for t in self.tails) + ")"


@dataclass(frozen=True)
class BallKey:
    """Canonical name of a closed ball of radius ``q^-(n+1)`` in the m-dimensional ideal."""

    field: Field
    m: int
    n: int
    coeffs: tuple[int, ...]


def expand_fraction(a: Sequence[Poly], den: Poly, n: int) -> TruncVec:
    """Tail vector of ``a/den`` to precision ``n``; every ``deg a_i < deg den``."""
    if den.is_zero:
        raise ZeroDenominator("expansion with zero denominator")
    if n < 1:
        raise PrecisionTooLow("precision must be >= 1")
    field = den.field
    rows = []
    for ai in a:
        if ai.field != field:
            raise FieldMismatch("numerator and denominator over different fields")
        if not ai.is_zero and ai.deg >= den.deg:
            raise DegreeOverflow(f"deg {ai} >= deg {den}")
        rows.append(_expand(field, ai.coeffs, den.coeffs, n))
    return TruncVec.from_raw(field, rows)


def split_integer_fractional(f: Poly, g: Poly, n: int) -> tuple[Poly, TruncTail]:
    """``f/g = s + t`` with ``s`` polynomial and ``t`` in the maximal ideal (to precision n)."""
    if g.is_zero:
        raise ZeroDenominator("split with zero denominator")
    s, r = _divmod(f.field, f.coeffs, g.coeffs)
    tail = _expand(f.field, r, g.coeffs, n)
    return Poly._raw(f.field, s), TruncTail(f.field, tail)


def ball_key(v: TruncVec, n_ball: int) -> BallKey:
    if n_ball > v.n:
        raise PrecisionTooLow(f"ball precision {n_ball} exceeds tail precision {v.n}")
    flat = tuple(c for t in v.tails for c in t.coeffs[:n_ball])
    return BallKey(v.field, v.m, n_ball, flat)


def check_budget(required: int, budget: int | None, what: str = "enumeration") -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if required > budget:
        raise BudgetExceeded(required, budget, what)


def raw_truncations(q: int, m: int, n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Raw rows of every truncation class, canonical order (last coefficient fastest)."""
    for flat in itertools.product(range(q), repeat=m * n):
        yield tuple(flat[i * n : (i + 1) * n] for i in range(m))


def enumerate_truncations(field: Field, m: int, n: int, budget: int | None = None) -> Iterator[TruncVec]:
    """All ``q^(mn)`` truncation classes, each of Haar measure ``q^-(mn)``."""
    check_budget(field.q ** (m * n), budget)
    for rows in raw_truncations(field.q, m, n):
        yield TruncVec.from_raw(field, rows)


def parse_tail(field: Field, text: str) -> TruncTail:
    text = text.strip().replace(" ", "")
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"tail must look like [a1,...,an], got {text!r}")
    body = text[1:-1]
    if not body:
        raise ParseError("empty tail")
    return TruncTail(field, tuple(parse_element_code(field, it) for it in _split_list(body)))


def parse_tailvec(field: Field, text: str) -> TruncVec:
    """``[..]`` for m = 1, or ``[..];[..]`` (optionally wrapped in parentheses)."""
    text = text.strip().replace(" ", "")
    if text.startswith("(") and text.endswith(")") and text[1:2] == "[":
        text = text[1:-1]
    return TruncVec(tuple(parse_tail(field, part) for part in text.split(";")))
