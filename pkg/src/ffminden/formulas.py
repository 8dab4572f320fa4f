"""Closed-form laws as exact rationals.

Three evaluators: the degree law for all monic denominators in dimension 1,
the Möbius/divisor expression for the law of the minimal denominator itself,
and the law for denominators restricted to the powers of one polynomial.
The first two are evaluated exactly as printed in the literature, even where
that does not produce a probability measure.  Anything suspicious (mass not
equal to 1, undefined or negative factorials) is reported in ``diagnostics``
rather than repaired.  The brute-force laws in :mod:`ffminden.dist` are the
ground truth these are compared against.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial

from .errors import ConstantBase, DegreeTooLarge, NonMonicBase, ValidationError
from .polyring import Poly, divisor_count, mobius, monic_divisors


@dataclass(frozen=True)
class ExactProb:
    """``count / q**(m*n)``, kept unreduced."""

    count: int
    q: int
    m: int
    n: int

    @property
    def total(self) -> int:
        return self.q ** (self.m * self.n)

    @property
    def value(self) -> Fraction:
        return Fraction(self.count, self.total)

    @property
    def in_range(self) -> bool:
        return 0 <= self.count <= self.total

    def __str__(self):
        return f"{self.count}/{self.total}"


@dataclass
class FormulaLaw:
    masses: dict
    q: int
    m: int
    n: int
    diagnostics: list[str] = dc_field(default_factory=list)

    @property
    def mass(self) -> Fraction:
        return sum((p.value for p in self.masses.values()), Fraction(0))


def _ceil_half(n: int) -> int:
    return -(-n // 2)


def formula_degdist_monic(q: int, n: int) -> FormulaLaw:
    """Printed law of the minimal degree over all monic denominators (m = 1)."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    total = q**n
    masses: dict[int, ExactProb] = {}
    if n == 1:
        masses[0] = ExactProb(1, q, 1, 1)
        masses[1] = ExactProb(q - 1, q, 1, 1)
    else:
        for k in range(n + 1):
            if k == 0:
                count = 1
            elif k <= _ceil_half(n):
                # (q-1)/q^(n-2k+1) = (q-1) q^(2k-1) / q^n
                count = (q - 1) * q ** (2 * k - 1)
            else:
                count = 0
            masses[k] = ExactProb(count, q, 1, n)
    law = FormulaLaw(masses, q, 1, n)
    if law.mass != 1:
        law.diagnostics.append(f"printed masses sum to {law.mass}, not 1")
    for k, p in masses.items():
        if not p.in_range:
            law.diagnostics.append(f"mass at k={k} is {p.value}, outside [0, 1]")
    assert all(p.total == total for p in masses.values())
    return law


def formula_qmin_monic(
    q_poly: Poly, n: int, variant: str = "printed", N: Poly | None = None
) -> tuple[ExactProb, list[str]]:
    """Printed Möbius/divisor expression for ``P(Q_min = Q)``, all monic denominators, m = 1.

    ``variant="printed"`` uses ``D(Q/N)`` in the leading factorial ratio, as
    printed; ``"corrected"`` uses ``D(Q/M)``.  ``D(Q/N)`` only makes sense when
    ``N`` divides ``Q``; otherwise that term is skipped with a diagnostic, as
    is any factorial of a negative number.
    """
    if variant not in ("printed", "corrected"):
        raise ValidationError(f"unknown variant {variant!r}")
    Q = q_poly
    if Q.is_zero:
        raise ValidationError("Q must be nonzero")
    if not Q.is_monic:
        raise NonMonicBase(f"{Q} is not monic")
    if Q.deg > n:
        raise DegreeTooLarge(f"deg {Q} > n = {n}")
    field = Q.field
    q = field.q
    if N is None:
        N = Poly.x(field, n)
    diags: list[str] = []
    total = q ** Q.deg
    divs_Q, _ = monic_divisors(Q)
    for M in divs_Q:
        QM = Q // M
        D_M = divisor_count(M)
        D_QM = divisor_count(QM)
        if variant == "corrected":
            D_ratio = D_QM
        else:
            quo, rem = divmod(Q, N)
            D_ratio = divisor_count(quo.monic()) if rem.is_zero and not quo.is_zero else None
        inner_total = 0
        for ell in range(1, D_M + 1):
            term = 0
            if D_ratio is None:
                diags.append(f"M={M}, l={ell}: D(Q/N) undefined since N does not divide Q; term skipped")
            elif D_ratio - ell < 0:
                diags.append(f"M={M}, l={ell}: factorial of {D_ratio - ell}; term skipped")
            else:
                term += Fraction(factorial(D_QM), factorial(D_ratio - ell))
            divs_QM, _ = monic_divisors(QM)
            for R in divs_QM:
                if divisor_count(QM // R) < ell:
                    continue
                D_R = divisor_count(R)
                if D_R - ell < 0:
                    diags.append(f"M={M}, R={R}, l={ell}: factorial of {D_R - ell}; term skipped")
                    continue
                term += mobius(R) * Fraction(factorial(D_R), factorial(D_R - ell))
            inner_total += (-1) ** ell * term
        total += q ** M.deg * inner_total
    if isinstance(total, Fraction):
        if total.denominator != 1:
            diags.append(f"non-integral count {total}")
        total = int(total) if total.denominator == 1 else total
    return ExactProb(total, q, 1, n), diags


def formula_lacunary(q: int, m: int, n: int, P: Poly) -> FormulaLaw:
    """Law of ``Q_min`` over the powers ``P^d``; keys are exponents ``d``."""
    if P.is_zero or P.deg < 1:
        raise ConstantBase(f"{P} must be non-constant")
    if not P.is_monic:
        raise NonMonicBase(f"{P} must be monic")
    if P.field.q != q:
        raise ValidationError("q does not match the field of P")
    k = n // P.deg
    absP = q**P.deg
    total = q ** (m * n)
    masses: dict[int, ExactProb] = {0: ExactProb(1, q, m, n)}
    for d in range(1, k + 1):
        masses[d] = ExactProb(absP ** (m * d) - absP ** (m * (d - 1)), q, m, n)
    masses[k + 1] = ExactProb(total - absP ** (m * k), q, m, n)
    law = FormulaLaw(masses, q, m, n)
    if law.mass != 1:
        law.diagnostics.append(f"masses sum to {law.mass}, not 1")
    return law
