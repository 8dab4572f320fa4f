"""Farey fractions with denominators restricted to S, and their ball counts.

``F^m_{k,S}`` holds the primitive ``P/Q`` with ``Q`` in S, ``deg Q <= k`` and
every ``deg P_i < deg Q``.  The zero vector appears as ``0/1`` exactly when
``1`` is in S (it is the only primitive fraction with ``Q = 1``).

Ball counting works on integer ball codes: the prefix-``n`` tail of ``P/Q``
read as a base-``q`` number, coordinates concatenated.  The code of a class
equals its position in :func:`ffminden.laurent.raw_truncations`.  For a fixed
``Q`` the code is linear in ``P``, so whole slices ``R_{<d}`` are handled as
numpy arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .denomset import DenomSet
from .ff import Field
from .laurent import TruncVec, _expand, check_budget
from .polyring import Poly, factor, format_poly, is_primitive

Raw = tuple[int, ...]


@dataclass(frozen=True)
class FareyFraction:
    P: tuple[Poly, ...]
    Q: Poly

    @property
    def m(self) -> int:
        return len(self.P)

    def expand(self, n: int) -> TruncVec:
        field = self.Q.field
        return TruncVec.from_raw(field, [_expand(field, p.coeffs, self.Q.coeffs, n) for p in self.P])

    def code(self, n: int) -> int:
        return tail_code(self.Q.field.q, self.expand(n).raw)

    def __str__(self):
        num = ",".join(format_poly(p) for p in self.P)
        if self.m > 1:
            num = f"({num})"
        return f"{num}/{format_poly(self.Q)}"


def tail_code(q: int, rows: Sequence[Sequence[int]]) -> int:
    """Ball code of a raw tail vector (first coordinate most significant)."""
    v = 0
    for row in rows:
        for c in row:
            v = v * q + c
    return v


def code_rows(q: int, m: int, n: int, code: int) -> tuple[Raw, ...]:
    flat = []
    for _ in range(m * n):
        code, r = divmod(code, q)
        flat.append(r)
    flat.reverse()
    return tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(m))


# numpy field helpers ------------------------------------------------------


@lru_cache(maxsize=None)
def _np_tables(field: Field) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.asarray(field.add_table, dtype=np.int64),
        np.asarray(field.mul_table, dtype=np.int64),
    )


def _lincomb(field: Field, digits: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """``digits @ basis`` over F_q: (N, d) x (d, k) -> (N, k)."""
    if field.is_prime_field:
        if digits.shape[1] * (field.p - 1) ** 2 >= 2**53:
            return (digits @ basis) % field.p
        # float BLAS is exact: every partial sum stays below 2**53
        prod = _as_float(digits) @ basis.astype(np.float64)
        return prod.astype(np.int64) % field.p
    add, mul = _np_tables(field)
    acc = np.zeros((digits.shape[0], basis.shape[1]), dtype=np.int64)
    for j in range(basis.shape[0]):
        acc = add[acc, mul[digits[:, j][:, None], basis[j][None, :]]]
    return acc


_FLOAT_DIGITS: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _as_float(digits: np.ndarray) -> np.ndarray:
    # cached digit tables are long-lived, so key their float copies by identity
    key = id(digits)
    hit = _FLOAT_DIGITS.get(key)
    if hit is None or hit[0] is not digits:
        hit = (digits, digits.astype(np.float64))
        _FLOAT_DIGITS[key] = hit
    return hit[1]


@lru_cache(maxsize=64)
def _digits(q: int, d: int) -> np.ndarray:
    """Coefficient rows of every polynomial in R_{<d}, in index order."""
    idx = np.arange(q**d, dtype=np.int64)
    return np.stack([(idx // q**j) % q for j in range(d)], axis=1) if d else np.zeros((1, 0), dtype=np.int64)


@lru_cache(maxsize=1 << 16)
def _prime_factors(field: Field, qc: Raw) -> tuple[Raw, ...]:
    if len(qc) <= 1:
        return ()
    return tuple(f.coeffs for f, _ in factor(Poly._raw(field, qc)))


def _fractions_of(field: Field, m: int, n: int, qc: Raw) -> tuple[np.ndarray, np.ndarray]:
    """Ball codes and primitivity mask for all ``P/Q`` with ``P`` in ``R_{<d}^m``.

    Both arrays are indexed by the canonical P order (first coordinate slowest).
    """
    q = field.q
    d = len(qc) - 1
    dig = _digits(q, d)
    if d == 0:
        return np.zeros(1, dtype=np.int64), np.ones(1, dtype=bool)
    basis = np.array([_expand(field, (0,) * j + (1,), qc, n) for j in range(d)], dtype=np.int64)
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    single = _lincomb(field, dig, basis) @ weights
    zero_mod = [_multiples_mask(field, d, r) for r in _prime_factors(field, qc)]
    codes = single
    nonprim = list(zero_mod)
    shift = q**n
    for _ in range(m - 1):
        codes = (codes[:, None] * shift + single[None, :]).ravel()
        nonprim = [(a[:, None] & z[None, :]).ravel() for a, z in zip(nonprim, zero_mod)]
    mask = np.ones(codes.shape[0], dtype=bool)
    for z in nonprim:
        mask &= ~z
    return codes, mask


def _multiples_mask(field: Field, d: int, r: Raw) -> np.ndarray:
    """Boolean mask over ``R_{<d}`` (index order) of the multiples of ``r``."""
    q = field.q
    k = d - (len(r) - 1)
    mask = np.zeros(q**d, dtype=bool)
    if k == 0:
        mask[0] = True
        return mask
    basis = np.array([(0,) * j + r + (0,) * (k - 1 - j) for j in range(k)], dtype=np.int64)
    idx = _lincomb(field, _digits(q, k), basis) @ (q ** np.arange(d, dtype=np.int64))
    mask[idx] = True
    return mask


# enumeration ----------------------------------------------------------------


def farey_enumerate(field: Field, m: int, k: int, s: DenomSet, budget: int | None = None) -> list[FareyFraction]:
    """Every fraction of ``F^m_{k,S}``, ordered by deg Q, then Q, then P."""
    check_budget(field.q ** ((m + 1) * k), budget, "Farey enumeration")
    out = []
    for d in range(k + 1):
        for qc in s.raw_members(d):
            Q = Poly._raw(field, qc)
            for idxs in itertools.product(range(field.q**d), repeat=m):
                P = tuple(Poly.from_index(field, i) for i in idxs)
                if is_primitive(P, Q):
                    out.append(FareyFraction(P, Q))
    return out


def farey_count(field: Field, m: int, k: int, s: DenomSet, budget: int | None = None) -> int:
    """``#F^m_{k,S}`` (``0`` for ``k < 0``)."""
    if k < 0:
        return 0
    check_budget(field.q ** ((m + 1) * k), budget, "Farey enumeration")
    total = 0
    for d in range(k + 1):
        for qc in s.raw_members(d):
            total += int(_fractions_of(field, m, 1, qc)[1].sum())
    return total


def ball_counts(field: Field, m: int, n: int, s: DenomSet, kmax: int, budget: int | None = None) -> list[int]:
    """``[f(0), ..., f(kmax)]``: distinct radius-``q^-(n+1)`` balls around ``F^m_{k,S}``."""
    check_budget(field.q ** ((m + 1) * kmax), budget, "ball count")
    total = field.q ** (m * n)
    covered = np.zeros(total, dtype=bool)
    seen = 0
    out = []
    for d in range(kmax + 1):
        if seen < total:
            for qc in s.raw_members(d):
                codes, mask = _fractions_of(field, m, n, qc)
                covered[codes[mask]] = True
                seen = int(covered.sum())
                if seen == total:
                    break
        out.append(seen)
    return out


def ball_count_f(field: Field, m: int, n: int, s: DenomSet, k: int, budget: int | None = None) -> int:
    return ball_counts(field, m, n, s, k, budget)[-1]


def _multiplicity(field: Field, m: int, n: int, s: DenomSet, d: int) -> np.ndarray:
    """How many fractions of ``F^m_{d,S}`` fall in each ball."""
    mult = np.zeros(field.q ** (m * n), dtype=np.int64)
    for e in range(d + 1):
        for qc in s.raw_members(e):
            codes, mask = _fractions_of(field, m, n, qc)
            mult += np.bincount(codes[mask], minlength=mult.size)
    return mult


def is_separated(fr: FareyFraction, s: DenomSet, n: int, budget: int | None = None) -> bool:
    """True iff no other fraction of ``F^m_{deg Q,S}`` shares the prefix-``n`` ball of ``fr``."""
    field = fr.Q.field
    d = fr.Q.deg
    check_budget(field.q ** ((fr.m + 1) * d), budget, "separation test")
    mult = _multiplicity(field, fr.m, n, s, d)
    return int(mult[fr.code(n)]) == 1


def separated_ball_count(field: Field, m: int, n: int, s: DenomSet, Q: Poly, budget: int | None = None) -> int:
    """``f_{m,n,S,Q}``: distinct balls around the (S,n)-separated fractions with denominator Q."""
    if not s.contains(Q):
        return 0
    d = Q.deg
    check_budget(field.q ** ((m + 1) * d), budget, "separated ball count")
    mult = _multiplicity(field, m, n, s, d)
    codes, mask = _fractions_of(field, m, n, Q.coeffs)
    sep = codes[mask][mult[codes[mask]] == 1]
    return int(np.unique(sep).size)


def separated_counts(
    field: Field, m: int, n: int, s: DenomSet, kmax: int, budget: int | None = None
) -> dict[Raw, int]:
    """``f_{m,n,S,Q}`` for every ``Q`` in S with ``deg Q <= kmax``, in one sweep."""
    check_budget(field.q ** ((m + 1) * kmax), budget, "separated ball count")
    mult = np.zeros(field.q ** (m * n), dtype=np.int64)
    out: dict[Raw, int] = {}
    for d in range(kmax + 1):
        live = {}
        for qc in s.raw_members(d):
            codes, mask = _fractions_of(field, m, n, qc)
            live[qc] = codes[mask]
            mult += np.bincount(live[qc], minlength=mult.size)
        for qc, codes in live.items():
            out[qc] = int(np.unique(codes[mult[codes] == 1]).size)
    return out


def iter_ball_codes(field: Field, m: int, n: int, s: DenomSet, d: int) -> Iterator[tuple[Raw, np.ndarray]]:
    """(Q, codes of its primitive fractions) for each Q in the degree-``d`` slice."""
    for qc in s.raw_members(d):
        codes, mask = _fractions_of(field, m, n, qc)
        yield qc, codes[mask]
