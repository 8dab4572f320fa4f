"""Minimal denominators of tail classes with denominators restricted to S.

For a monic ``Q`` of degree ``d`` and a tail vector ``alpha`` known to
precision ``n``, a numerator ``P`` with ``|alpha - P/Q| < q^-n`` exists iff
the coefficients of ``Q*alpha`` at ``x^j`` vanish for ``d-n <= j < 0``; the
coefficients at ``max(0, d-n) <= j < d`` are then forced to be those of
``P``.  When ``d > n`` the ``d-n`` lowest coefficients of each ``P_i`` are
free and we search them for a primitive choice.  Either way no search over
all of ``R_{<d}^m`` is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .denomset import DEFAULT_CAP, DenomSet
from .errors import CapExceeded, DegreeOverflow, FieldMismatch, PrecisionTooLow, ValidationError, ZeroDenominator
from .ff import Field
from .laurent import TruncVec, _expand
from .polyring import Poly, _gcd, _mod, _pad, _trim

Raw = tuple[int, ...]


def _primitive_with(field: Field, q_coeffs: Raw, ps: Sequence[Raw]) -> bool:
    g = q_coeffs
    for p in ps:
        if not p:
            continue
        g = _gcd(field, g, _mod(field, p, g))
        if g == (1,):
            return True
    return g == (1,)


def _witness(field: Field, rows: Sequence[Raw], n: int, qc: Raw) -> tuple[Raw, ...] | None:
    """First primitive numerator vector for denominator ``qc`` or None."""
    d = len(qc) - 1
    lo = d - n
    add, mul = field.add_table, field.mul_table
    forced = []
    for a in rows:
        # coefficient of x^j in Q*alpha uses a_{l-j} for l = max(0, j+1) .. d
        if lo < 0:
            for j in range(-1, lo - 1, -1):
                acc = 0
                for l in range(0, d + 1):
                    c = qc[l]
                    if c:
                        acc = add[acc][mul[c][a[l - j - 1]]]
                if acc:
                    return None
        top = []
        for j in range(max(lo, 0), d):
            acc = 0
            for l in range(j + 1, d + 1):
                c = qc[l]
                if c:
                    acc = add[acc][mul[c][a[l - j - 1]]]
            top.append(acc)
        forced.append(top)
    if lo <= 0:
        ps = tuple(_trim(list(t)) for t in forced)
        return ps if _primitive_with(field, qc, ps) else None
    q = field.q
    free = q**lo
    for choice in itertools.product(range(free), repeat=len(rows)):
        ps = tuple(_trim(list(_pad(q, c, lo)) + t) for c, t in zip(choice, forced))
        if _primitive_with(field, qc, ps):
            return ps
    return None


@dataclass(frozen=True)
class MinDenResult:
    """Outcome of a minimal-denominator scan.

    ``candidates`` lists every accepting denominator of the minimal degree
    when the scan was audited (``q_min``); ``unique`` is then False whenever
    more than one exists.  ``exceeds_bound`` marks degrees above ``m_S(n)``.
    """

    degree: int
    Q: Poly
    P: tuple[Poly, ...]
    n: int
    m_S: int
    candidates: tuple[Poly, ...] = dc_field(default=())
    audited: bool = False

    @property
    def unique(self) -> bool | None:
        return len(self.candidates) == 1 if self.audited else None

    @property
    def exceeds_bound(self) -> bool:
        return self.degree > self.m_S


def minden_raw(
    field: Field,
    rows: Sequence[Raw],
    n: int,
    s: DenomSet,
    cap: int = DEFAULT_CAP,
    audit: bool = False,
    stop_after: int | None = None,
) -> tuple[int, Raw, tuple[Raw, ...], tuple[Raw, ...]]:
    """Scan degrees upward; return ``(d, Q, P, accepting Qs)`` on raw tuples.

    Without ``audit`` the scan stops at the first accepting denominator; with
    it, at ``stop_after`` accepting ones (all of them when None).
    """
    limit = (stop_after or 0) if audit else 1
    for d in range(cap + 1):
        members = s.raw_members(d)
        if not members:
            continue
        found: list[Raw] = []
        first_p = None
        for qc in members:
            ps = _witness(field, rows, n, qc)
            if ps is None:
                continue
            if first_p is None:
                first_p = ps
            found.append(qc)
            if len(found) == limit:
                break
        if found:
            return d, found[0], first_p, tuple(found)
    raise CapExceeded(f"no denominator of degree <= {cap} in {s.spec()} approximates {rows}")


def _check_alpha(alpha: TruncVec, n: int, s: DenomSet) -> tuple[tuple[Raw, ...], int]:
    if n < 1:
        raise ValidationError("n must be >= 1")
    if alpha.n < n:
        raise PrecisionTooLow(f"tail precision {alpha.n} < n = {n}")
    if alpha.field != s.field:
        raise FieldMismatch("tail and denominator set over different fields")
    return tuple(r[:n] for r in alpha.raw), s.m_S(n)


def _result(field, n, bound, raw, audit) -> MinDenResult:
    d, qc, ps, found = raw
    Q = Poly._raw(field, qc)
    P = tuple(Poly._raw(field, p) for p in ps)
    assert all(p.is_zero or p.deg < d for p in P), "witness numerator not below |Q|"
    return MinDenResult(
        degree=d,
        Q=Q,
        P=P,
        n=n,
        m_S=bound,
        candidates=tuple(Poly._raw(field, c) for c in found) if audit else (),
        audited=audit,
    )


def deg_min(alpha: TruncVec, n: int, s: DenomSet, cap: int = DEFAULT_CAP) -> MinDenResult:
    """Least degree of a denominator in S approximating ``alpha`` within ``q^-n``.

    The first accepting denominator in canonical order is returned as the witness.
    """
    rows, bound = _check_alpha(alpha, n, s)
    return _result(alpha.field, n, bound, minden_raw(alpha.field, rows, n, s, max(cap, bound)), False)


def q_min(alpha: TruncVec, n: int, s: DenomSet, cap: int = DEFAULT_CAP) -> MinDenResult:
    """Minimal denominator, with every tie at the minimal degree collected.

    On ties the canonically smallest denominator is returned and
    ``result.unique`` is False.
    """
    rows, bound = _check_alpha(alpha, n, s)
    return _result(alpha.field, n, bound, minden_raw(alpha.field, rows, n, s, max(cap, bound), True), True)


def discrete_rows(a: Sequence[Poly], N: Poly) -> tuple[Raw, ...]:
    if N.is_zero:
        raise ZeroDenominator("N must be nonzero")
    n = N.deg
    if n < 1:
        raise ValidationError("deg N must be >= 1")
    rows = []
    for ai in a:
        if ai.field != N.field:
            raise FieldMismatch("a and N over different fields")
        if not ai.is_zero and ai.deg >= n:
            raise DegreeOverflow(f"deg {ai} >= deg N = {n}")
        rows.append(_expand(N.field, ai.coeffs, N.coeffs, n))
    return tuple(rows)


def discrete_minden(
    a: Sequence[Poly], N: Poly, s: DenomSet, statistic: str = "deg", cap: int = DEFAULT_CAP
) -> MinDenResult:
    """``d_{N,S}(a)`` (statistic ``deg``) or ``Q_{N,S}(a)`` (statistic ``qmin``)."""
    rows = discrete_rows(a, N)
    alpha = TruncVec.from_raw(N.field, rows)
    if statistic == "deg":
        return deg_min(alpha, N.deg, s, cap)
    if statistic == "qmin":
        return q_min(alpha, N.deg, s, cap)
    raise ValidationError(f"unknown statistic {statistic!r}")
