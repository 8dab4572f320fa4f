"""Exact laws of the minimal denominator, and the equality checks built on them.

The continuous law counts outcomes over all ``q^(mn)`` truncation classes
(each of Haar measure ``q^-(mn)``); the discrete law counts outcomes over all
numerators ``a`` in ``R_{<n}^m`` for a fixed ``N`` of degree ``n``.  Both are
integer counters, so every comparison below is exact equality.

Work is split into contiguous ranges of the canonical enumeration; worker
counters are merged by addition, which makes results independent of the
number of workers.
"""

from __future__ import annotations

import json
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Sequence

from .denomset import DEFAULT_CAP, DenomSet, Powers
from .errors import ValidationError, WrongStatistic
from .farey import ball_counts, farey_count, separated_counts
from .ff import Field
from .formulas import formula_degdist_monic, formula_lacunary, formula_qmin_monic
from .laurent import _expand, check_budget
from .minden import minden_raw
from .polyring import Poly, _pad, format_poly, enumerate_polys

STATISTICS = ("deg", "qmin")


@dataclass
class Distribution:
    """Integer counts of an outcome over a sample space of size ``q^(mn)``.

    Outcomes are degrees (statistic ``deg``) or raw coefficient tuples of
    monic denominators (statistic ``qmin``).  ``ambiguous`` counts classes
    with more than one minimal denominator and ``beyond_bound`` those whose
    minimal degree exceeds ``m_S(n)``.
    """

    field: Field
    m: int
    n: int
    set_spec: str
    statistic: str
    counts: dict
    m_S: int
    N: Poly | None = None
    ambiguous: int = 0
    beyond_bound: int = 0
    finite_set: bool = False

    @property
    def total(self) -> int:
        return self.field.q ** (self.m * self.n)

    def count(self, outcome) -> int:
        if isinstance(outcome, Poly):
            outcome = outcome.coeffs
        return self.counts.get(outcome, 0)

    def outcomes(self) -> list:
        if self.statistic == "deg":
            return sorted(self.counts)
        return sorted(self.counts, key=lambda c: (len(c), tuple(reversed(c))))

    def outcome_text(self, outcome) -> str:
        if self.statistic == "deg":
            return str(outcome)
        return format_poly(Poly._raw(self.field, outcome))

    def by_degree(self) -> dict[int, int]:
        if self.statistic == "deg":
            return dict(self.counts)
        out: Counter = Counter()
        for qc, c in self.counts.items():
            out[len(qc) - 1] += c
        return dict(out)

    def context(self) -> dict:
        return _context(self.field, self.m, self.n, self.set_spec, self.N, self.statistic)

    def to_dict(self) -> dict:
        return {
            "context": self.context(),
            "total": self.total,
            "m_S": self.m_S,
            "outcomes": [
                {
                    "outcome": self.outcome_text(o),
                    "count": self.counts[o],
                    "probability": f"{self.counts[o]}/{self.total}",
                    "reduced": str(Fraction(self.counts[o], self.total)),
                }
                for o in self.outcomes()
            ],
            "flags": {
                "ambiguous_classes": self.ambiguous,
                "beyond_m_S": self.beyond_bound,
                "finite_set": self.finite_set,
            },
        }


def _context(field: Field, m: int, n: int, set_spec: str, N: Poly | None, statistic: str | None) -> dict:
    ctx: dict[str, Any] = {"q": field.q, "p": field.p, "e": field.e}
    if field.modulus is not None:
        ctx["modulus"] = list(field.modulus)
    ctx.update({"m": m, "n": n, "set": set_spec})
    if N is not None:
        ctx["N"] = format_poly(N)
    if statistic is not None:
        ctx["statistic"] = statistic
    return ctx


# engines ---------------------------------------------------------------------


def _rows_from_index(q: int, m: int, n: int, idx: int) -> tuple[tuple[int, ...], ...]:
    flat = []
    for _ in range(m * n):
        idx, r = divmod(idx, q)
        flat.append(r)
    flat.reverse()
    return tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(m))


def _a_from_index(q: int, m: int, n: int, idx: int) -> tuple[tuple[int, ...], ...]:
    """Coefficient tuples of the ``idx``-th vector of ``R_{<n}^m`` (first coordinate slowest)."""
    out = []
    for _ in range(m):
        idx, r = divmod(idx, q**n)
        out.append(_pad(q, r, n))
    return tuple(reversed(out))


def _chunk(args) -> tuple[Counter, int, int]:
    field, m, n, s, statistic, lo, hi, N, cap = args
    q = field.q
    audit = statistic == "qmin"
    bound = s.m_S(n, cap)
    counts: Counter = Counter()
    ambiguous = beyond = 0
    for idx in range(lo, hi):
        if N is None:
            rows = _rows_from_index(q, m, n, idx)
        else:
            rows = tuple(_expand(field, a, N.coeffs, n) for a in _a_from_index(q, m, n, idx))
        d, qc, _, found = minden_raw(field, rows, n, s, cap, audit=audit, stop_after=2)
        counts[qc if audit else d] += 1
        ambiguous += len(found) > 1
        beyond += d > bound
    return counts, ambiguous, beyond


def _run(field, m, n, s, statistic, N, workers, cap) -> tuple[Counter, int, int]:
    total = field.q ** (m * n)
    workers = max(1, workers)
    nchunks = workers * 4 if workers > 1 else 1
    edges = [total * i // nchunks for i in range(nchunks + 1)]
    jobs = [(field, m, n, s, statistic, lo, hi, N, cap) for lo, hi in zip(edges, edges[1:]) if hi > lo]
    if workers == 1:
        parts = [_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk, jobs))
    counts: Counter = Counter()
    amb = beyond = 0
    for c, a, b in parts:
        counts.update(c)
        amb += a
        beyond += b
    return counts, amb, beyond


def _check(field: Field, m: int, n: int, statistic: str, budget: int | None) -> None:
    if m < 1 or n < 1:
        raise ValidationError("m and n must be >= 1")
    if statistic not in STATISTICS:
        raise ValidationError(f"statistic must be one of {STATISTICS}")
    check_budget(field.q ** (m * n), budget)


def continuous_dist(
    field: Field,
    m: int,
    n: int,
    s: DenomSet,
    statistic: str = "deg",
    workers: int = 1,
    budget: int | None = None,
    cap: int = DEFAULT_CAP,
) -> Distribution:
    """Haar law of the minimal degree / denominator over all truncation classes."""
    _check(field, m, n, statistic, budget)
    counts, amb, beyond = _run(field, m, n, s, statistic, None, workers, cap)
    return Distribution(field, m, n, s.spec(), statistic, dict(counts), s.m_S(n, cap), None, amb, beyond, not s.infinite)


def discrete_dist(
    field: Field,
    m: int,
    N: Poly,
    s: DenomSet,
    statistic: str = "deg",
    workers: int = 1,
    budget: int | None = None,
    cap: int = DEFAULT_CAP,
) -> Distribution:
    """Law of ``d_{N,S}`` / ``Q_{N,S}`` over all ``a`` in ``R_{<n}^m`` with ``n = deg N``."""
    if N.is_zero or N.deg < 1:
        raise ValidationError("N must have degree >= 1")
    n = N.deg
    _check(field, m, n, statistic, budget)
    counts, amb, beyond = _run(field, m, n, s, statistic, N, workers, cap)
    return Distribution(field, m, n, s.spec(), statistic, dict(counts), s.m_S(n, cap), N, amb, beyond, not s.infinite)


def expectation(dist: Distribution) -> Fraction:
    if dist.statistic != "deg":
        raise WrongStatistic("expectation needs the degree statistic")
    return Fraction(sum(k * c for k, c in dist.counts.items()), dist.total)


# N samples ---------------------------------------------------------------------


def default_N_list(field: Field, n: int, count: int = 4, seed: int = 0) -> list[Poly]:
    """Canonical sample of ``R_{=n}``: ``x^n``, ``x^n+1``, ``x^n+x^(n-1)`` and a seeded random one.

    Duplicates are dropped and the list is topped up in canonical order so
    that it holds ``min(count, #R_{=n})`` distinct entries.
    """
    xn = Poly.x(field, n)
    cands = [xn, xn + 1, xn + Poly.x(field, n - 1)]
    rng = random.Random(f"{field.q}:{n}:{seed}")
    lead = rng.randrange(1, field.q)
    lower = rng.randrange(field.q**n)
    cands.append(Poly._raw(field, _pad(field.q, lower, n) + (lead,)))
    out: list[Poly] = []
    for c in cands:
        if c not in out:
            out.append(c)
    if len(out) < count:
        for c in enumerate_polys(field, n, "deg="):
            if len(out) >= count:
                break
            if c not in out:
                out.append(c)
    return out[: max(count, 1)] if len(out) > count else out


# reports -----------------------------------------------------------------------


@dataclass
class VerifyReport:
    context: dict
    outcomes: list[dict]
    verdict: str
    flags: dict = dc_field(default_factory=dict)
    mismatches: list = dc_field(default_factory=list)
    elapsed_ms: int | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == "exact-match"

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "context": self.context,
            "outcomes": self.outcomes,
            "verdict": self.verdict,
            "mismatches": self.mismatches,
            "flags": self.flags,
            "elapsed_ms": self.elapsed_ms if timing else None,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=False)


def _verdict(mismatches: list) -> str:
    return "exact-match" if not mismatches else "mismatch"


def _ms(t0: float) -> int:
    return int((time.perf_counter() - t0) * 1000)


def verify_same_dist(
    field: Field,
    m: int,
    n: int,
    s: DenomSet,
    Ns: Sequence[Poly] | None = None,
    workers: int = 1,
    budget: int | None = None,
    cap: int = DEFAULT_CAP,
) -> VerifyReport:
    """Continuous vs discrete law of the minimal degree, for every listed N."""
    t0 = time.perf_counter()
    Ns = list(Ns) if Ns is not None else default_N_list(field, n)
    for N in Ns:
        if N.deg != n:
            raise ValidationError(f"deg {N} != n = {n}")
    cont = continuous_dist(field, m, n, s, "deg", workers, budget, cap)
    discs = [discrete_dist(field, m, N, s, "deg", workers, budget, cap) for N in Ns]
    keys = sorted(set(cont.counts).union(*[d.counts for d in discs]))
    outcomes, mismatches = [], []
    for k in keys:
        row = {"outcome": k, "continuous": cont.count(k), "discrete": [d.count(k) for d in discs]}
        outcomes.append(row)
        for N, d in zip(Ns, discs):
            if d.count(k) != cont.count(k):
                mismatches.append({"outcome": k, "N": format_poly(N), "continuous": cont.count(k), "discrete": d.count(k)})
    ctx = _context(field, m, n, s.spec(), None, "deg")
    ctx["N_list"] = [format_poly(N) for N in Ns]
    flags = {
        "beyond_m_S": cont.beyond_bound,
        "m_S": cont.m_S,
        "finite_set": not s.infinite,
        "expectation_continuous": str(expectation(cont)),
        "expectation_discrete": [str(expectation(d)) for d in discs],
    }
    return VerifyReport(ctx, outcomes, _verdict(mismatches), flags, mismatches, _ms(t0))


def verify_qmin_equals(
    field: Field,
    m: int,
    n: int,
    s: DenomSet,
    Ns: Sequence[Poly] | None = None,
    workers: int = 1,
    budget: int | None = None,
    cap: int = DEFAULT_CAP,
) -> VerifyReport:
    """Per-denominator law: discrete vs continuous vs separated ball count ``f_{m,n,S,Q}``.

    The verdict is the full three-way comparison.  ``flags["discrete_vs_continuous"]``
    records the two-way part on its own.
    """
    t0 = time.perf_counter()
    Ns = list(Ns) if Ns is not None else default_N_list(field, n)
    for N in Ns:
        if N.deg != n:
            raise ValidationError(f"deg {N} != n = {n}")
    cont = continuous_dist(field, m, n, s, "qmin", workers, budget, cap)
    discs = [discrete_dist(field, m, N, s, "qmin", workers, budget, cap) for N in Ns]
    bound = cont.m_S
    sep_budget = max(budget or 0, field.q ** ((m + 1) * bound))
    sep = separated_counts(field, m, n, s, bound, sep_budget)
    keys = set(cont.counts).union(sep, *[d.counts for d in discs])
    keys = sorted(keys, key=lambda c: (len(c), tuple(reversed(c))))
    outcomes, mismatches = [], []
    two_way = True
    for qc in keys:
        text = format_poly(Poly._raw(field, qc))
        c = cont.count(qc)
        ds = [d.count(qc) for d in discs]
        f_q = sep.get(qc)
        outcomes.append({"outcome": text, "continuous": c, "discrete": ds, "separated": f_q})
        for N, dv in zip(Ns, ds):
            if dv != c:
                two_way = False
                mismatches.append({"outcome": text, "N": format_poly(N), "continuous": c, "discrete": dv})
        if f_q is None:
            if c:
                mismatches.append({"outcome": text, "continuous": c, "separated": None, "reason": "deg Q > m_S(n)"})
        elif f_q != c:
            mismatches.append({"outcome": text, "continuous": c, "separated": f_q})
    ctx = _context(field, m, n, s.spec(), None, "qmin")
    ctx["N_list"] = [format_poly(N) for N in Ns]
    flags = {
        "discrete_vs_continuous": "exact-match" if two_way else "mismatch",
        "ambiguous_classes": cont.ambiguous,
        "beyond_m_S": cont.beyond_bound,
        "separated_total": sum(sep.values()),
        "sample_space": cont.total,
        "finite_set": not s.infinite,
    }
    return VerifyReport(ctx, outcomes, _verdict(mismatches), flags, mismatches, _ms(t0))


def verify_lacunary(
    field: Field, m: int, n: int, P: Poly, workers: int = 1, budget: int | None = None
) -> VerifyReport:
    """Closed-form law for ``S = {P^d}`` vs both brute-force laws, with ``N = x^r P^k``."""
    t0 = time.perf_counter()
    s = Powers(field, P)
    law = formula_lacunary(field.q, m, n, P)
    k, r = divmod(n, P.deg)
    N = Poly.x(field, r) * P**k
    cont = continuous_dist(field, m, n, s, "qmin", workers, budget)
    disc = discrete_dist(field, m, N, s, "qmin", workers, budget)
    outcomes, mismatches = [], []
    for d, prob in law.masses.items():
        qc = (P**d).coeffs
        row = {
            "outcome": format_poly(P**d),
            "exponent": d,
            "formula": prob.count,
            "continuous": cont.count(qc),
            "discrete": disc.count(qc),
        }
        outcomes.append(row)
        if not (prob.count == row["continuous"] == row["discrete"]):
            mismatches.append(row)
    listed = {(P**d).coeffs for d in law.masses}
    for dist in (cont, disc):
        for qc, c in dist.counts.items():
            if qc not in listed:
                mismatches.append({"outcome": format_poly(Poly._raw(field, qc)), "count": c, "reason": "outside formula support"})
    violations = _lacunary_membership(field, m, n, P, N, s)
    flags = {"mass": str(law.mass), "diagnostics": law.diagnostics, "membership_violations": violations, "k": k, "r": r}
    if violations:
        mismatches.append({"reason": "membership claim", "violations": violations})
    ctx = _context(field, m, n, s.spec(), N, "qmin")
    return VerifyReport(ctx, outcomes, _verdict(mismatches), flags, mismatches, _ms(t0))


def _lacunary_membership(field: Field, m: int, n: int, P: Poly, N: Poly, s: DenomSet) -> int:
    """Count ``a`` contradicting: ``Q_N(a) = P^d`` (d <= k) implies ``a = 0 mod x^r P^(k-d)``,
    and ``Q_N(a) = P^(k+1)`` implies ``a != 0 mod x^r``."""
    k, r = divmod(n, P.deg)
    q = field.q
    bad = 0
    for idx in range(q ** (m * n)):
        a = [Poly._raw(field, _trim_raw(c)) for c in _a_from_index(q, m, n, idx)]
        rows = tuple(_expand(field, ai.coeffs, N.coeffs, n) for ai in a)
        d_deg, qc, _, _ = minden_raw(field, rows, n, s)
        d = d_deg // P.deg
        if d <= k:
            mod = Poly.x(field, r) * P ** (k - d)
            if any(not (ai % mod).is_zero for ai in a):
                bad += 1
        elif r > 0:
            xr = Poly.x(field, r)
            if all((ai % xr).is_zero for ai in a):
                bad += 1
    return bad


def _trim_raw(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def verify_farey_regime(
    field: Field, m: int, n: int, s: DenomSet, workers: int = 1, budget: int | None = None, cap: int = DEFAULT_CAP
) -> VerifyReport:
    """Small-degree regime: law = Farey-count differences, and ball counts vs the law.

    Checks, all exact:
      * for ``2k <= n``: ``count(k) = #F_k - #F_{k-1}`` and ``f(k) = #F_k``;
      * for ``k <= m_S(n)``: ``count(k) = f(k) - f(k-1)``;
      * ``f(m_S(n)) = q^(mn)``.
    """
    t0 = time.perf_counter()
    cont = continuous_dist(field, m, n, s, "deg", workers, budget, cap)
    bound = cont.m_S
    fb = max(budget or 0, field.q ** ((m + 1) * bound))
    f = ball_counts(field, m, n, s, bound, fb)
    total = cont.total
    outcomes, mismatches = [], []
    farey_prev = 0
    for k in range(bound + 1):
        row: dict[str, Any] = {"k": k, "continuous": cont.count(k), "f": f[k]}
        diff_f = f[k] - (f[k - 1] if k else 0)
        row["f_diff"] = diff_f
        if diff_f != cont.count(k):
            mismatches.append({"k": k, "check": "count = f(k)-f(k-1)", "continuous": cont.count(k), "f_diff": diff_f})
        if 2 * k <= n:
            fk = farey_count(field, m, k, s, fb)
            row["farey"] = fk
            row["farey_diff"] = fk - farey_prev
            if fk - farey_prev != cont.count(k):
                mismatches.append({"k": k, "check": "count = #F_k-#F_(k-1)", "continuous": cont.count(k), "farey_diff": fk - farey_prev})
            if f[k] != fk:
                mismatches.append({"k": k, "check": "f(k) = #F_k", "f": f[k], "farey": fk})
            farey_prev = fk
        outcomes.append(row)
    full = f[bound] == total
    if not full:
        mismatches.append({"k": bound, "check": "f(m_S(n)) = q^(mn)", "f": f[bound], "expected": total})
    flags = {"m_S": bound, "f_at_m_S_is_full": full, "beyond_m_S": cont.beyond_bound}
    ctx = _context(field, m, n, s.spec(), None, "deg")
    return VerifyReport(ctx, outcomes, _verdict(mismatches), flags, mismatches, _ms(t0))


def verify_formulas(field: Field, n: int, workers: int = 1, budget: int | None = None) -> VerifyReport:
    """Printed all-monic laws (m = 1) against the brute-force oracle.

    Degree law: agreement is required for ``n = 1`` and for ``2k <= n``; other
    disagreements are recorded under ``flags`` only.  Denominator law: both
    variants are recorded per ``Q``; nothing is required of them.
    """
    from .denomset import AllMonic

    t0 = time.perf_counter()
    s = AllMonic(field)
    q = field.q
    deg_oracle = continuous_dist(field, 1, n, s, "deg", workers, budget)
    q_oracle = continuous_dist(field, 1, n, s, "qmin", workers, budget)
    printed = formula_degdist_monic(q, n)
    outcomes, mismatches, flagged = [], [], []
    for k in range(n + 1):
        fv = printed.masses.get(k)
        fc = fv.count if fv else 0
        oc = deg_oracle.count(k)
        required = n == 1 or 2 * k <= n
        row = {"law": "degree", "outcome": k, "formula": fc, "oracle": oc, "match": fc == oc, "required": required}
        outcomes.append(row)
        if fc != oc:
            (mismatches if required else flagged).append(row)
    qdiag: dict[str, list[str]] = {}
    oracle_sum = 0
    for d in range(n + 1):
        for Q in enumerate_polys(field, d, "monic="):
            oc = q_oracle.count(Q)
            oracle_sum += oc
            row = {"law": "qmin", "outcome": format_poly(Q), "oracle": oc}
            for variant in ("printed", "corrected"):
                val, diags = formula_qmin_monic(Q, n, variant)
                row[variant] = str(val.count)
                row[f"{variant}_match"] = val.count == oc
                if diags:
                    qdiag[f"{format_poly(Q)}:{variant}"] = diags
                if val.count != oc:
                    flagged.append({"law": "qmin", "variant": variant, "outcome": format_poly(Q), "formula": str(val.count), "oracle": oc})
            outcomes.append(row)
    if oracle_sum != q**n or sum(deg_oracle.counts.values()) != q**n:
        mismatches.append({"check": "oracle mass", "qmin_sum": oracle_sum, "expected": q**n})
    flags = {
        "degree_formula_mass": str(printed.mass),
        "degree_formula_diagnostics": printed.diagnostics,
        "unrequired_discrepancies": flagged,
        "qmin_formula_diagnostics": qdiag,
    }
    ctx = _context(field, 1, n, s.spec(), None, None)
    return VerifyReport(ctx, outcomes, _verdict(mismatches), flags, mismatches, _ms(t0))
